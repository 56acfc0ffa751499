import csv
import subprocess
import sys

import numpy as np
import pytest

from gaussmanifold.cli import main
from gaussmanifold.diagnostics import TwoBranchMixSpec, gaussian_reference_entropy, mixture_moments
from gaussmanifold.entanglement import negativity_from_overlaps
from gaussmanifold.gaussian_core import overlap
from gaussmanifold.sweeps import cat_pair

CAT = """
kappa = 1.0
p = 0.3

[[branch]]
x0 = 1.4142135623730951

[[branch]]
x0 = -1.4142135623730951

[mixture]
coefficients = [[1, 1], [1, -1]]
weights = [0.7, 0.3]
"""

BELL = """
[bell]
phi = 0.0
p = 0.0
a = [{x0 = 1.0}, {x0 = -1.0}]
b = [{x0 = 1.0, r = 0.2}, {x0 = -1.0, r = 0.2}]
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="spec.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestOverlapAndGram:
    def test_vacuum_and_displaced(self, write, capsys, tmp_path):
        spec = write("[[branch]]\n\n[[branch]]\nx0 = 2.0\n")
        out_csv = str(tmp_path / "o.csv")
        code, out, _ = run(["overlap", "--spec", spec, "--out", out_csv], capsys)
        assert code == 0
        rows = read_csv(out_csv)
        assert rows[0] == ["i", "j", "re", "im", "abs"]
        assert abs(float(rows[1][4]) - np.exp(-1)) < 1e-12
        assert "0.367879441171442" in out

    def test_single_branch_gram(self, write, capsys):
        code, out, _ = run(["gram", "--spec", write("[[branch]]\nr = 0.3\n")], capsys)
        assert code == 0
        assert out.splitlines()[0] == "1+0j"

    def test_gram_prints_fifteen_digits(self, write, capsys):
        code, out, _ = run(["gram", "--spec", write(CAT)], capsys)
        assert code == 0
        assert out.splitlines()[0].split()[1] == f"{np.exp(-2):.15g}+0j"

    def test_identical_branches_exit_3(self, write, capsys):
        code, _, err = run(["gram", "--spec", write("[[branch]]\nx0 = 1\n\n[[branch]]\nx0 = 1\n")], capsys)
        assert code == 3
        assert "min eigenvalue" in err

    def test_pseudo_inverse_flag_accepts_identical_branches(self, write, capsys):
        spec = write("[[branch]]\nx0 = 1\n\n[[branch]]\nx0 = 1\n")
        assert run(["gram", "--spec", spec, "--pseudo-inverse", "1e-8"], capsys)[0] == 0


class TestErrors:
    def test_syntax_error_has_position(self, write, capsys):
        code, _, err = run(["overlap", "--spec", write("[[branch]\nx0 = 1\n")], capsys)
        assert code == 2
        assert "line 1" in err

    def test_raw_and_parametric_conflict(self, write, capsys):
        spec = write("[[branch]]\nx0 = 1\nd = [0, 0]\nV = [[0.5, 0], [0, 0.5]]\n")
        assert run(["overlap", "--spec", spec], capsys)[0] == 2

    def test_unknown_key(self, write, capsys):
        assert run(["overlap", "--spec", write("[[branch]]\nx = 1\n")], capsys)[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(["overlap", "--spec", str(tmp_path / "none.toml")], capsys)[0] == 2

    def test_missing_spec_flag(self, capsys):
        assert run(["gram"], capsys)[0] == 2

    def test_bad_subcommand(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2

    def test_unphysical_covariance_exit_4(self, write, capsys):
        spec = write("[[branch]]\nd = [0, 0]\nV = [[0.1, 0], [0, 0.1]]\n")
        assert run(["overlap", "--spec", spec], capsys)[0] == 4

    def test_invalid_weights_exit_4(self, write, capsys):
        spec = write(CAT.replace("weights = [0.7, 0.3]", "weights = [0.7, 0.7]"))
        assert run(["reduce", "--spec", spec], capsys)[0] == 4

    def test_distinct_codes(self):
        from gaussmanifold import cli

        codes = [cli.EXIT_OK, cli.EXIT_PARSE, cli.EXIT_NEAR_DEPENDENCE, cli.EXIT_UNPHYSICAL, cli.EXIT_VERIFY]
        assert codes == [0, 2, 3, 4, 5]


class TestStateCommands:
    def test_reduce(self, write, capsys):
        code, out, _ = run(["reduce", "--spec", write(CAT)], capsys)
        assert code == 0
        spectrum = [float(x) for x in out.split("spectrum:")[1].split("\n")[0].split()]
        disc = np.sqrt(1 - 4 * 0.21)
        assert np.allclose(spectrum, [(1 + disc) / 2, (1 - disc) / 2], atol=1e-12)

    def test_entropy_units(self, write, capsys, tmp_path):
        spec = write(CAT)
        nats, bits = str(tmp_path / "n.csv"), str(tmp_path / "b.csv")
        assert run(["entropy", "--spec", spec, "--alpha", "2", "--out", nats], capsys)[0] == 0
        assert run(["entropy", "--spec", spec, "--alpha", "2", "--bits", "--out", bits], capsys)[0] == 0
        n, b = read_csv(nats), read_csv(bits)
        assert float(n[2][2]) == pytest.approx(-np.log(1 - 0.42), abs=1e-12)
        for rn, rb in zip(n[1:], b[1:]):
            assert float(rb[2]) == pytest.approx(float(rn[2]) / np.log(2), rel=1e-14)

    def test_nongauss(self, write, capsys, tmp_path):
        out_csv = str(tmp_path / "ng.csv")
        code, out, _ = run(["nongauss", "--spec", write(CAT), "--out", out_csv], capsys)
        assert code == 0
        header, values = read_csv(out_csv)
        row = dict(zip(header, map(float, values)))
        assert row["det_rho"] == pytest.approx(0.21, abs=1e-12)
        assert row["delta_nG"] == pytest.approx(row["S_tau"] - row["S_rho"], abs=1e-12)

    def test_nongauss_needs_two_branches(self, write, capsys):
        assert run(["nongauss", "--spec", write("kappa = 1\n[[branch]]\n")], capsys)[0] == 2

    def test_negativity(self, write, capsys, tmp_path):
        out_csv = str(tmp_path / "neg.csv")
        assert run(["negativity", "--spec", write(BELL), "--out", out_csv], capsys)[0] == 0
        header, values = read_csv(out_csv)
        row = dict(zip(header, map(float, values)))
        assert row["a"] == pytest.approx(np.exp(-1), abs=1e-12)
        assert row["negativity"] == pytest.approx(negativity_from_overlaps(row["a"], row["b"], 0.0), abs=1e-10)


class TestSweeps:
    def test_nongauss_rows(self, capsys, tmp_path):
        out_csv = str(tmp_path / "s.csv")
        argv = ["sweep-nongauss", "--kappa", "0", "1", "--alpha-min", "0.5", "--alpha-max", "2", "--alpha-step", "0.5"]
        assert run(argv + ["--p", "0", "--out", out_csv], capsys)[0] == 0
        rows = read_csv(out_csv)
        assert rows[0] == ["alpha", "kappa", "delta_nG"]
        body = [tuple(map(float, r)) for r in rows[1:]]
        assert [(a, k) for a, k, _ in body] == [(a, k) for k in (0.0, 1.0) for a in (0.5, 1.0, 1.5, 2.0)]
        for alpha, kappa, value in body:
            if kappa == 0:
                assert value == 0.0
            else:
                spec = TwoBranchMixSpec(*cat_pair(alpha), 1.0, 0.0)
                assert value == gaussian_reference_entropy(mixture_moments(spec))

    def test_bit_identical_and_thread_independent(self, capsys, tmp_path):
        argv = ["sweep-nongauss", "--kappa", "0.5", "1", "--alpha-max", "1.0", "--out"]
        paths = [str(tmp_path / f"{i}.csv") for i in range(3)]
        run(argv + [paths[0]], capsys)
        run(argv + [paths[1]], capsys)
        run(argv + [paths[2], "--threads", "2"], capsys)
        contents = [open(p, "rb").read() for p in paths]
        assert contents[0] == contents[1] == contents[2]

    def test_spec_file_supplies_defaults(self, write, capsys, tmp_path):
        spec = write("[sweep]\nkappa = [1.0]\nalpha_min = 1.0\nalpha_max = 1.0\nalpha_step = 0.1\np = 0.3\n")
        out_csv = str(tmp_path / "s.csv")
        assert run(["sweep-nongauss", "--spec", spec, "--out", out_csv], capsys)[0] == 0
        assert len(read_csv(out_csv)) == 2

    def test_negativity_grid(self, capsys, tmp_path):
        out_csv = str(tmp_path / "n.csv")
        argv = ["sweep-negativity", "--phi", "0", "--alpha-max", "1.0", "--alpha-step", "0.25"]
        argv += ["--r-min", "-0.4", "--r-max", "0.4", "--r-step", "0.2", "--out", out_csv]
        assert run(argv, capsys)[0] == 0
        rows = [tuple(map(float, r)) for r in read_csv(out_csv)[1:]]
        assert len(rows) == 5 * 5
        for alpha, r, value in rows:
            g1, g2 = cat_pair(alpha, r)
            a = abs(overlap(g1, g2))
            expected = 0.0 if a >= 1 - 1e-15 else negativity_from_overlaps(a, a, 0.0)
            assert abs(value - expected) < 1e-12
            if alpha == 0 and r == 0:
                assert value < 1e-12

    def test_negativity_needs_phi(self, capsys):
        assert run(["sweep-negativity"], capsys)[0] == 2

    def test_bad_grid(self, capsys):
        assert run(["sweep-nongauss", "--alpha-step", "-1"], capsys)[0] == 4


class TestVerify:
    def test_default_passes(self, capsys):
        code, out, _ = run(["verify"], capsys)
        assert code == 0
        assert out.strip().endswith("PASS")

    def test_single_scenario(self, capsys):
        code, out, _ = run(["verify", "--scenario", "cat-entropy"], capsys)
        assert code == 0 and "S(rho)" in out

    def test_absurd_tolerance_fails(self, capsys):
        code, out, _ = run(["verify", "--scenario", "bell-negativity", "--tolerance", "1e-18"], capsys)
        assert code == 5
        assert "FAIL" in out


def test_module_entry_point(tmp_path):
    spec = tmp_path / "s.toml"
    spec.write_text("[[branch]]\n\n[[branch]]\nx0 = 2.0\n")
    proc = subprocess.run([sys.executable, "-m", "gaussmanifold", "overlap", "--spec", str(spec)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.367879441171442" in proc.stdout
