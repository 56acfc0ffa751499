"""Registered closed-form versus Fock-oracle comparisons for the ``verify`` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock_oracle as fo
from .diagnostics import (
    TwoBranchMixSpec,
    gaussian_reference_entropy,
    mixture_moments,
    non_gaussianity,
    two_branch_entropy,
)
from .entanglement import TwoBranchBellSpec, build_bipartite_effective, negativity_numeric
from .gaussian_core import cross_characteristic, cross_moments, make_displaced_squeezed, overlap
from .sweeps import cat_pair

DEFAULT_TOLERANCE = 1e-7


@dataclass
class Comparison:
    quantity: str
    closed_form: complex
    oracle: complex

    @property
    def diff(self) -> float:
        return float(abs(self.closed_form - self.oracle))


def _gauge_fixed(spec_overlap_phase, vec):
    return fo.FockVector(vec.amplitudes * spec_overlap_phase, vec.dims, vec.deficit)


def scenario_overlap(cutoff=60):
    p1, p2 = (1.0, 0.0, 0.3, np.pi / 4), (-0.4, 0.8, -0.2, 1.1)
    g1, g2 = (make_displaced_squeezed(1, [p]) for p in (p1, p2))
    f1, f2 = fo.fock_displaced_squeezed(*p1, cutoff), fo.fock_displaced_squeezed(*p2, cutoff)
    xi = (0.3, -0.2)
    return [
        Comparison("overlap", overlap(g1, g2), fo.fock_overlap(f1, f2)),
        Comparison("chi(0.3,-0.2)", cross_characteristic(g1, g2, xi), fo.fock_characteristic(f1, f2, xi)),
    ]


def scenario_cross_moments(cutoff=60):
    g1, g2 = cat_pair(0.7)
    f1, f2 = (fo.fock_branch(g, cutoff) for g in (g1, g2))
    cm = cross_moments(g1, g2)
    o, r, M = fo.fock_cross_moments(f1, f2)
    rows = [Comparison("g12", cm.overlap, o)]
    rows += [Comparison(f"r12[{k}]", cm.r[k], r[k]) for k in range(2)]
    rows += [Comparison(f"M12[{i}{j}]", cm.M[i, j], M[i, j]) for i in range(2) for j in range(i, 2)]
    return rows


def _fock_two_branch(spec, cutoff):
    f1 = fo.fock_branch(spec.g1, cutoff)
    f2 = _gauge_fixed(spec.gauge, fo.fock_branch(spec.g2, cutoff))
    plus = fo.fock_superposition([f1, f2], [1.0, spec.kappa])
    minus = fo.fock_superposition([f1, f2], [1.0, -spec.kappa])
    return fo.fock_density([plus, minus], [1 - spec.p, spec.p])


def scenario_cat_entropy(cutoff=60):
    g1, g2 = cat_pair(1.0)
    spec = TwoBranchMixSpec(g1, g2, 1.0, 0.3)
    rho = _fock_two_branch(spec, cutoff)
    return [Comparison("S(rho)", two_branch_entropy(spec), fo.fock_entropy(rho))]


def scenario_nongauss(cutoff=80):
    g1, g2 = cat_pair(1.0)
    spec = TwoBranchMixSpec(g1, g2, 1.0, 0.1)
    rho = _fock_two_branch(spec, cutoff)
    _, V = fo.fock_moments(rho)
    return [
        Comparison("S(tau)", gaussian_reference_entropy(mixture_moments(spec)), fo.fock_gaussian_entropy(V)),
        Comparison("delta_nG", non_gaussianity(spec), fo.fock_nongaussianity(rho)),
    ]


def fock_bell_density(spec: TwoBranchBellSpec, cutoff):
    """Oracle density of the dephased Bell-like state, gauge-matched to ``spec``."""
    va1, vb1 = fo.fock_branch(spec.gA1, cutoff), fo.fock_branch(spec.gB1, cutoff)
    va2, vb2 = fo.fock_branch(spec.gA2, cutoff), fo.fock_branch(spec.gB2, cutoff)
    pa = fo.fock_overlap(va1, va2)
    pb = fo.fock_overlap(vb1, vb2)
    phase = (np.conj(pa) / abs(pa) if abs(pa) else 1.0) * (np.conj(pb) / abs(pb) if abs(pb) else 1.0)
    gamma1 = np.kron(va1.amplitudes, vb1.amplitudes)
    gamma2 = np.kron(va2.amplitudes, vb2.amplitudes) * phase
    psi = gamma1 + np.exp(1j * spec.phi) * gamma2
    psi /= np.linalg.norm(psi)
    rho = (1 - spec.p) * np.outer(psi, psi.conj())
    rho += 0.5 * spec.p * (np.outer(gamma1, gamma1.conj()) + np.outer(gamma2, gamma2.conj()))
    return rho, (int(np.prod(va1.dims)), int(np.prod(vb1.dims)))


def scenario_bell_negativity(cutoff=25):
    g1, g2 = cat_pair(0.6, 0.2)
    spec = TwoBranchBellSpec(g1, g2, g1, g2, np.pi / 3, 0.4)
    rho, dims = fock_bell_density(spec, cutoff)
    return [Comparison("negativity", negativity_numeric(build_bipartite_effective(spec)), fo.fock_negativity(rho, dims))]


SCENARIOS = {
    "overlap": scenario_overlap,
    "cross-moments": scenario_cross_moments,
    "cat-entropy": scenario_cat_entropy,
    "nongauss": scenario_nongauss,
    "bell-negativity": scenario_bell_negativity,
}


def run(name: str, tolerance: float = DEFAULT_TOLERANCE):
    """Run one scenario; returns ``(rows, passed)``."""
    rows = SCENARIOS[name]()
    return rows, all(row.diff <= tolerance for row in rows)
