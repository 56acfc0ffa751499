"""Command-line front end.

Exit codes: 0 success, 2 parse/usage error, 3 near-dependent branches,
4 unphysical or invalid input, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import specfile
from .diagnostics import (
    TwoBranchMixSpec,
    gaussian_reference_entropy,
    mixture_moments,
    non_gaussianity,
    renyi_entropy,
    two_branch_detrho,
    two_branch_entropy,
    von_neumann_entropy,
)
from .entanglement import (
    BipartiteEffectiveState,
    TwoBranchBellSpec,
    bell_effective_matrix,
    negativity_closed_form,
    negativity_numeric,
)
from .errors import GaussManifoldError, NearDependenceError
from .gaussian_core import overlap
from .manifold import BranchManifold, SupportedMixture, build_manifold, effective_density, generalized_spectrum
from .sweeps import grid, negativity_sweep, nongauss_sweep

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NEAR_DEPENDENCE = 3
EXIT_UNPHYSICAL = 4
EXIT_VERIFY = 5


def _fmt(x) -> str:
    return f"{x:.15g}"


def _fmt_complex(z) -> str:
    z = complex(z)
    return f"{z.real:.15g}{z.imag:+.15g}j"


def _entropy_scale(args) -> float:
    return 1.0 / math.log(2) if args.bits else 1.0


def _write_rows(args, header, rows):
    """Write CSV to ``--out`` (or stdout when absent)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _require_spec(args) -> dict:
    if not args.spec:
        raise specfile.SpecParseError(f"'{args.command}' needs --spec <file>")
    return specfile.load(args.spec)


def _manifold(args, branches):
    return build_manifold(branches, pseudo_inverse_cutoff=args.pseudo_inverse)


def cmd_overlap(args):
    branches = specfile.parse_branches(_require_spec(args))
    rows = []
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            z = overlap(branches[i], branches[j])
            rows.append((i, j, z.real, z.imag, abs(z)))
            print(f"<g{i}|g{j}> = {_fmt_complex(z)}  |.| = {_fmt(abs(z))}")
    if args.out:
        _write_rows(args, ["i", "j", "re", "im", "abs"], rows)


def cmd_gram(args):
    m = _manifold(args, specfile.parse_branches(_require_spec(args)))
    for row in m.gram:
        print("  ".join(_fmt_complex(z) for z in row))
    print(f"min eigenvalue: {_fmt(m.min_gram_eigenvalue)}")
    if args.out:
        rows = [(i, j, m.gram[i, j].real, m.gram[i, j].imag) for i in range(m.dim) for j in range(m.dim)]
        _write_rows(args, ["i", "j", "re", "im"], rows)


def _reduced(args):
    doc = _require_spec(args)
    m = _manifold(args, specfile.parse_branches(doc))
    coeffs, weights = specfile.parse_mixture(doc, m.dim)
    mix = SupportedMixture(coeffs, weights)
    return m, mix, effective_density(m, mix)


def cmd_reduce(args):
    m, mix, state = _reduced(args)
    print("effective density matrix (Lowdin basis):")
    for row in state.matrix:
        print("  ".join(_fmt_complex(z) for z in row))
    print("spectrum:", " ".join(_fmt(x) for x in state.spectrum()))
    print("generalized XG spectrum:", " ".join(_fmt(x) for x in generalized_spectrum(m, mix)))
    if args.out:
        rho = state.matrix
        rows = [(i, j, rho[i, j].real, rho[i, j].imag) for i in range(m.dim) for j in range(m.dim)]
        _write_rows(args, ["i", "j", "re", "im"], rows)


def cmd_entropy(args):
    _, _, state = _reduced(args)
    scale = _entropy_scale(args)
    unit = "bits" if args.bits else "nats"
    rows = [("von_neumann", 1.0, von_neumann_entropy(state) * scale)]
    rows += [("renyi", a, renyi_entropy(state, a) * scale) for a in args.alpha]
    for name, order, value in rows:
        label = name if name == "von_neumann" else f"renyi(alpha={order:g})"
        print(f"{label} = {_fmt(value)} {unit}")
    if args.out:
        _write_rows(args, ["entropy", "order", unit], rows)


def cmd_nongauss(args):
    doc = _require_spec(args)
    branches = specfile.parse_branches(doc)
    if len(branches) != 2:
        raise specfile.SpecParseError("nongauss needs exactly two [[branch]] tables")
    spec = TwoBranchMixSpec(branches[0], branches[1], specfile.scalar(doc, "kappa"), specfile.scalar(doc, "p", 0.0))
    scale = _entropy_scale(args)
    values = {
        "g": spec.g,
        "det_rho": two_branch_detrho(spec),
        "S_rho": two_branch_entropy(spec) * scale,
        "S_tau": gaussian_reference_entropy(mixture_moments(spec)) * scale,
        "delta_nG": non_gaussianity(spec) * scale,
    }
    for k, v in values.items():
        print(f"{k} = {_fmt(v)}")
    if args.out:
        _write_rows(args, list(values), [list(values.values())])


def cmd_negativity(args):
    a_pair, b_pair, phi, p = specfile.parse_bell(_require_spec(args))
    spec = TwoBranchBellSpec(a_pair[0], a_pair[1], b_pair[0], b_pair[1], phi, p)
    ma = BranchManifold.from_gram([[1, spec.a], [spec.a, 1]], pseudo_inverse_cutoff=args.pseudo_inverse)
    mb = BranchManifold.from_gram([[1, spec.b], [spec.b, 1]], pseudo_inverse_cutoff=args.pseudo_inverse)
    state = BipartiteEffectiveState(bell_effective_matrix(ma, mb, phi, p), ma, mb)
    closed = negativity_closed_form(spec)
    values = {
        "a": spec.a,
        "b": spec.b,
        "negativity": negativity_numeric(state),
        "negativity_coherent": closed,
        "bound": (1 - p) * closed,
    }
    for k, v in values.items():
        print(f"{k} = {_fmt(v)}")
    if args.out:
        _write_rows(args, list(values), [list(values.values())])


def _sweep_value(args, doc, name, default=None):
    flag = getattr(args, name)
    if flag is not None:
        return flag
    return specfile.scalar(doc, name, default, table="sweep") if doc else default


def cmd_sweep_nongauss(args):
    doc = specfile.load(args.spec) if args.spec else {}
    kappas = args.kappa if args.kappa is not None else doc.get("sweep", {}).get("kappa", [0.0, 1e-3, 1e-2, 0.2, 0.5, 1.0])
    alphas = grid(_sweep_value(args, doc, "alpha_min", 0.05), _sweep_value(args, doc, "alpha_max", 4.0), _sweep_value(args, doc, "alpha_step", 0.05))
    rows = nongauss_sweep(
        [float(k) for k in kappas],
        alphas,
        _sweep_value(args, doc, "p", 0.1),
        r=_sweep_value(args, doc, "r", 0.0),
        theta=_sweep_value(args, doc, "theta", 0.0),
        threads=args.threads,
    )
    scale = _entropy_scale(args)
    _write_rows(args, ["alpha", "kappa", "delta_nG"], [(a, k, v * scale) for a, k, v in rows])


def cmd_sweep_negativity(args):
    doc = specfile.load(args.spec) if args.spec else {}
    phi = _sweep_value(args, doc, "phi")
    if phi is None:
        raise specfile.SpecParseError("sweep-negativity needs --phi (or sweep.phi in the spec file)")
    alphas = grid(_sweep_value(args, doc, "alpha_min", 0.0), _sweep_value(args, doc, "alpha_max", 2.0), _sweep_value(args, doc, "alpha_step", 0.1))
    rs = grid(_sweep_value(args, doc, "r_min", 0.0), _sweep_value(args, doc, "r_max", 0.0), _sweep_value(args, doc, "r_step", 0.1))
    rows = negativity_sweep(
        alphas,
        rs,
        phi,
        _sweep_value(args, doc, "p", 0.0),
        theta1=_sweep_value(args, doc, "theta1", 0.0),
        theta2=_sweep_value(args, doc, "theta2", None),
        pseudo_inverse_cutoff=args.pseudo_inverse if args.pseudo_inverse is not None else 0.0,
        threads=args.threads,
    )
    _write_rows(args, ["alpha", "r", "negativity"], rows)


def cmd_verify(args):
    from . import verify

    names = list(verify.SCENARIOS) if args.scenario == "all" else [args.scenario]
    tol = args.tolerance if args.tolerance is not None else verify.DEFAULT_TOLERANCE
    failed = False
    table = []
    for name in names:
        rows, ok = verify.run(name, tol)
        failed |= not ok
        for row in rows:
            status = "ok" if row.diff <= tol else "FAIL"
            table.append((name, row.quantity, row.closed_form, row.oracle, row.diff, status))
    print(f"{'scenario':<16} {'quantity':<16} {'closed form':>40} {'oracle':>40} {'|diff|':>10}  status")
    for name, q, c, o, d, s in table:
        print(f"{name:<16} {q:<16} {_fmt_complex(c):>40} {_fmt_complex(o):>40} {d:10.2e}  {s}")
    print(f"tolerance {tol:.1e}: {'FAIL' if failed else 'PASS'}")
    if args.out:
        _write_rows(args, ["scenario", "quantity", "diff", "status"], [(n, q, float(d), s) for n, q, _, _, d, s in table])
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="TOML branch specification file")
    common.add_argument("--out", help="write CSV output to this file")
    common.add_argument("--bits", action="store_true", help="report entropies in bits instead of nats")
    common.add_argument("--tolerance", type=float, help="verification tolerance")
    common.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    common.add_argument(
        "--pseudo-inverse", type=float, default=None, metavar="CUTOFF",
        help="drop Gram eigenvalues <= CUTOFF instead of rejecting near-dependent branches",
    )

    parser = argparse.ArgumentParser(prog="gaussmanifold", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("overlap", parents=[common], help="pairwise branch overlaps").set_defaults(func=cmd_overlap)
    sub.add_parser("gram", parents=[common], help="Gram matrix and its smallest eigenvalue").set_defaults(func=cmd_gram)
    sub.add_parser("reduce", parents=[common], help="effective Lowdin-basis density matrix").set_defaults(func=cmd_reduce)
    p = sub.add_parser("entropy", parents=[common], help="von Neumann and Renyi entropies")
    p.add_argument("--alpha", type=float, action="append", default=[], help="Renyi order (repeatable)")
    p.set_defaults(func=cmd_entropy)
    sub.add_parser("nongauss", parents=[common], help="two-branch relative-entropy non-Gaussianity").set_defaults(func=cmd_nongauss)
    sub.add_parser("negativity", parents=[common], help="Bell-like encoding negativity").set_defaults(func=cmd_negativity)

    p = sub.add_parser("sweep-nongauss", parents=[common], help="delta_nG over (kappa, alpha) grid")
    p.add_argument("--kappa", type=float, nargs="+")
    for name in ("alpha-min", "alpha-max", "alpha-step", "p", "r", "theta"):
        p.add_argument(f"--{name}", type=float)
    p.set_defaults(func=cmd_sweep_nongauss)

    p = sub.add_parser("sweep-negativity", parents=[common], help="negativity over (alpha, r) grid")
    for name in ("alpha-min", "alpha-max", "alpha-step", "r-min", "r-max", "r-step", "phi", "p", "theta1", "theta2"):
        p.add_argument(f"--{name}", type=float)
    p.set_defaults(func=cmd_sweep_negativity)

    p = sub.add_parser("verify", parents=[common], help="compare closed forms with the truncated-Fock oracle")
    p.add_argument("--scenario", default="all", choices=["all", "overlap", "cross-moments", "cat-entropy", "nongauss", "bell-negativity"])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except specfile.SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NearDependenceError as exc:
        eig = "" if exc.eigenvalue is None else f" (min eigenvalue {exc.eigenvalue:.6e})"
        print(f"near-dependent branches: {exc}{eig}", file=sys.stderr)
        return EXIT_NEAR_DEPENDENCE
    except GaussManifoldError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
