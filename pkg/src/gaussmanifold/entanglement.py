"""Negativity of two-branch bipartite Bell-like encodings.

The effective state lives on ``C^2 (x) C^2`` with row/column index
``(i, alpha) -> 2 * i + alpha``, ``i`` the A-logical and ``alpha`` the
B-logical label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateStateError, DimensionError, InvalidParameterError, InvalidStateError
from .gaussian_core import GaussianPure, overlap
from .manifold import BranchManifold, validate_density

PPT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TwoBranchBellSpec:
    """``|Psi_phi> ∝ |gA1>|gB1> + e^{i phi} |gA2>|gB2>`` dephased with weight ``p``.

    The second branch on each side is rephased so that the local overlaps
    ``a = <gA1|gA2>`` and ``b = <gB1|gB2>`` are real and nonnegative; ``phi`` is
    the relative phase in that gauge.
    """

    gA1: GaussianPure
    gA2: GaussianPure
    gB1: GaussianPure
    gB2: GaussianPure
    phi: float = 0.0
    p: float = 0.0
    a: float = field(init=False)
    b: float = field(init=False)

    def __post_init__(self):
        if self.gA1.n_modes != self.gA2.n_modes or self.gB1.n_modes != self.gB2.n_modes:
            raise DimensionError("branches on the same party must share a mode count")
        _check_phase_and_weight(self.phi, self.p)
        object.__setattr__(self, "a", abs(overlap(self.gA1, self.gA2)))
        object.__setattr__(self, "b", abs(overlap(self.gB1, self.gB2)))
        normalization(self.a, self.b, self.phi)


def _check_phase_and_weight(phi, p):
    if not np.isfinite(phi):
        raise InvalidParameterError("phi must be finite")
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")


def normalization(a: float, b: float, phi: float) -> float:
    """``Z_phi = 2 + 2 a b cos(phi)``.

    Raises:
        DegenerateStateError: if ``Z_phi <= 1e-12``.
    """
    z = 2.0 + 2.0 * a * b * np.cos(phi)
    if z <= 1e-12:
        raise DegenerateStateError(f"Bell-like normalization {z:.3e} vanishes")
    return z


def negativity_from_overlaps(a: float, b: float, phi: float) -> float:
    """``sqrt((1-a^2)(1-b^2)) / (2 (1 + a b cos phi))`` for real ``a, b`` in ``[0, 1]``."""
    if not (0 <= a <= 1 and 0 <= b <= 1):
        raise InvalidParameterError("local overlaps must lie in [0, 1]")
    normalization(a, b, phi)
    return float(np.sqrt((1 - a * a) * (1 - b * b)) / (2 * (1 + a * b * np.cos(phi))))


def negativity_closed_form(spec: TwoBranchBellSpec) -> float:
    """Closed-form negativity of the coherent (``p = 0``) Bell-like state.

    ``spec.p`` is ignored; the dephased state is bounded by ``(1 - p)`` times
    this value.
    """
    return negativity_from_overlaps(spec.a, spec.b, spec.phi)


def schmidt_from_negativity(neg: float) -> tuple[float, float]:
    disc = np.sqrt(max(1.0 - 4.0 * neg * neg, 0.0))
    return 0.5 * (1 + disc), 0.5 * (1 - disc)


def schmidt_spectrum(spec: TwoBranchBellSpec) -> tuple[float, float]:
    """Reduced-state eigenvalues ``(1 +- sqrt(1 - 4 N^2)) / 2``, largest first."""
    return schmidt_from_negativity(negativity_closed_form(spec))


@dataclass(frozen=True, eq=False)
class BipartiteEffectiveState:
    """4x4 density matrix in the product of the two local Löwdin bases."""

    matrix: np.ndarray
    manifold_a: BranchManifold | None = field(default=None, repr=False)
    manifold_b: BranchManifold | None = field(default=None, repr=False)

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.shape != (4, 4):
            raise DimensionError(f"bipartite effective state must be 4x4, got {rho.shape}")
        rho = validate_density(rho)
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)

    def reduced_a(self) -> np.ndarray:
        return np.trace(self.matrix.reshape(2, 2, 2, 2), axis1=1, axis2=3)


def bell_effective_matrix(manifold_a: BranchManifold, manifold_b: BranchManifold, phi: float, p: float):
    """Assemble ``(1-p) rho_phi + p rho_inc`` from two local 2-branch manifolds."""
    _check_phase_and_weight(phi, p)
    if manifold_a.dim != 2 or manifold_b.dim != 2:
        raise DimensionError("each party needs exactly two branches")
    lift = np.kron(manifold_a.gram_sqrt, manifold_b.gram_sqrt)
    e11 = np.array([1, 0, 0, 0], dtype=complex)
    e22 = np.array([0, 0, 0, 1], dtype=complex)
    ab = manifold_a.gram[0, 1] * manifold_b.gram[0, 1]
    z = 2 + 2 * np.real(np.exp(1j * phi) * ab)
    if z <= 1e-12:
        raise DegenerateStateError(f"Bell-like normalization {z:.3e} vanishes")
    coherent = lift @ (e11 + np.exp(1j * phi) * e22) / np.sqrt(z)
    v1, v2 = lift @ e11, lift @ e22
    rho = (1 - p) * np.outer(coherent, coherent.conj()) + 0.5 * p * (np.outer(v1, v1.conj()) + np.outer(v2, v2.conj()))
    return 0.5 * (rho + rho.conj().T)


def build_bipartite_effective(spec: TwoBranchBellSpec, conditioning_threshold=None) -> BipartiteEffectiveState:
    """Effective 4x4 state of a dephased Bell-like encoding.

    Raises:
        NearDependenceError: if either local branch pair is nearly dependent.
    """
    ma = BranchManifold.from_gram([[1.0, spec.a], [spec.a, 1.0]], conditioning_threshold)
    mb = BranchManifold.from_gram([[1.0, spec.b], [spec.b, 1.0]], conditioning_threshold)
    return BipartiteEffectiveState(bell_effective_matrix(ma, mb, spec.phi, spec.p), ma, mb)


def bipartite_from_overlaps(a: float, b: float, phi: float, p: float = 0.0) -> BipartiteEffectiveState:
    """Same as :func:`build_bipartite_effective` from the gauge-fixed scalars alone."""
    ma = BranchManifold.from_gram([[1.0, a], [a, 1.0]])
    mb = BranchManifold.from_gram([[1.0, b], [b, 1.0]])
    return BipartiteEffectiveState(bell_effective_matrix(ma, mb, phi, p), ma, mb)


def partial_transpose_B(state) -> np.ndarray:
    """``(rho^{T_B})_{(i,alpha),(j,beta)} = rho_{(i,beta),(j,alpha)}``."""
    rho = state.matrix if isinstance(state, BipartiteEffectiveState) else np.asarray(state)
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def negativity_numeric(state, require_separable: bool = False) -> float:
    """Absolute sum of the negative eigenvalues of the partial transpose.

    Args:
        require_separable: raise instead of returning when the caller
            expects a PPT state and an eigenvalue falls below ``-1e-10``.
    """
    eigs = np.linalg.eigvalsh(partial_transpose_B(state))
    if require_separable and eigs.min() < -PPT_TOL:
        raise InvalidStateError(f"state expected separable has PT eigenvalue {eigs.min():.3e}")
    return float(-eigs[eigs < 0].sum())


def dephasing_bound(spec: TwoBranchBellSpec) -> float:
    """Convexity bound ``(1 - p) N(Psi_phi)``."""
    return (1.0 - spec.p) * negativity_closed_form(spec)
