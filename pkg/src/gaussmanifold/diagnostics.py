"""Entropies, Gaussian reference entropy and relative-entropy non-Gaussianity.

Entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .errors import (
    DestructiveInterferenceError,
    InvalidParameterError,
    InvalidStateError,
    NearDependenceError,
    UnphysicalCovarianceError,
    UnsupportedDimensionError,
)
from .gaussian_core import GaussianPure, cross_moments, overlap, symplectic_eigenvalues
from .manifold import BranchManifold, EffectiveState, SupportedMixture, clamp_spectrum, effective_density

NU_TOL = 1e-9
NEAR_ONE = 1e-12


def entropy_from_spectrum(eigs) -> float:
    lam = clamp_spectrum(eigs)
    return float(-np.sum(xlogy(lam, lam)))


def von_neumann_entropy(state: EffectiveState) -> float:
    """``-sum lambda log lambda`` over the clamped spectrum."""
    return entropy_from_spectrum(state.spectrum())


def renyi_entropy(state: EffectiveState, alpha: float) -> float:
    """Rényi entropy ``log(sum lambda^alpha) / (1 - alpha)``.

    Raises:
        InvalidParameterError: unless ``alpha > 0`` and ``alpha != 1``.
    """
    if not (alpha > 0) or alpha == 1:
        raise InvalidParameterError(f"Renyi order must be positive and != 1, got {alpha}")
    lam = state.spectrum()
    lam = lam[lam > 0]
    return float(np.log(np.sum(lam**alpha)) / (1.0 - alpha))


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """First moments, raw second moments, covariance and symplectic spectrum."""

    d: np.ndarray
    M: np.ndarray
    V: np.ndarray = field(init=False)
    symplectic_eigenvalues: np.ndarray = field(init=False)

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        M = np.asarray(self.M, dtype=float)
        M = 0.5 * (M + M.T)
        V = M - np.outer(d, d)
        V = 0.5 * (V + V.T)
        nu = symplectic_eigenvalues(V)
        if nu.min() < 0.5 - NU_TOL:
            raise UnphysicalCovarianceError(f"symplectic eigenvalue {nu.min():.12f} < 1/2")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "symplectic_eigenvalues", np.maximum(nu, 0.5))

    @classmethod
    def mix(cls, weights, summaries):
        """Moments of a convex mixture: ``d`` and ``M`` combine linearly, ``V`` last."""
        d = sum(w * s.d for w, s in zip(weights, summaries))
        M = sum(w * s.M for w, s in zip(weights, summaries))
        return cls(d, M)


def _real(x, what):
    x = np.asarray(x)
    if np.max(np.abs(x.imag)) > 1e-9 * max(1.0, np.max(np.abs(x))):
        raise InvalidStateError(f"{what} has a non-negligible imaginary part")
    return x.real


def _superposition_moments(g1, g2, c1, c2, cross):
    z = abs(c1) ** 2 + abs(c2) ** 2 + 2 * np.real(np.conj(c1) * c2 * cross.overlap)
    if z <= 1e-12:
        raise DestructiveInterferenceError(f"superposition norm {z:.3e} vanishes")
    m1 = g1.V + np.outer(g1.d, g1.d)
    m2 = g2.V + np.outer(g2.d, g2.d)
    w = np.conj(c1) * c2
    d = (abs(c1) ** 2 * g1.d + abs(c2) ** 2 * g2.d + 2 * np.real(w * cross.r)) / z
    M = (abs(c1) ** 2 * m1 + abs(c2) ** 2 * m2 + w * cross.M + np.conj(w * cross.M)) / z
    return MomentSummary(d, _real(M, "second-moment matrix"))


def superposition_moments(g1: GaussianPure, g2: GaussianPure, c1: complex, c2: complex) -> MomentSummary:
    """Moments of the normalised single-mode superposition ``c1|g1> + c2|g2>``.

    Raises:
        DestructiveInterferenceError: if the superposition has norm <= 1e-12.
    """
    if c1 == 0 and c2 == 0:
        raise InvalidParameterError("coefficients must not both vanish")
    return _superposition_moments(g1, g2, complex(c1), complex(c2), cross_moments(g1, g2))


def gaussian_reference_entropy(ms: MomentSummary) -> float:
    """Entropy of the Gaussian state with the same moments, from its symplectic spectrum."""
    nu = np.asarray(ms.symplectic_eigenvalues)
    if nu.min() < 0.5 - NU_TOL:
        raise UnphysicalCovarianceError(f"symplectic eigenvalue {nu.min():.12f} < 1/2")
    nu = np.maximum(nu, 0.5)
    return float(np.sum(xlogy(nu + 0.5, nu + 0.5) - xlogy(nu - 0.5, nu - 0.5)))


@dataclass(frozen=True, eq=False)
class TwoBranchMixSpec:
    """Phase-randomised two-branch state ``(1-p)|psi_+><psi_+| + p|psi_-><psi_-|``.

    ``|psi_+-> ∝ |g1> +- kappa |g2>`` after rephasing ``|g2>`` so that
    ``<g1|g2>`` is real and nonnegative.
    """

    g1: GaussianPure
    g2: GaussianPure
    kappa: float
    p: float

    def __post_init__(self):
        if self.g1.n_modes != 1 or self.g2.n_modes != 1:
            raise UnsupportedDimensionError("two-branch mixtures are single mode")
        if not (np.isfinite(self.kappa) and self.kappa >= 0):
            raise InvalidParameterError(f"kappa must be finite and nonnegative, got {self.kappa}")
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParameterError(f"p must lie in [0, 1], got {self.p}")

    @property
    def raw_overlap(self) -> complex:
        return overlap(self.g1, self.g2)

    @property
    def gauge(self) -> complex:
        """Unit factor applied to ``|g2>`` to make the overlap real and nonnegative."""
        raw = self.raw_overlap
        return np.conj(raw) / abs(raw) if abs(raw) > 0 else 1.0

    @property
    def g(self) -> float:
        return abs(self.raw_overlap)


def detrho_closed_form(kappa: float, p: float, g: float) -> float:
    """``det rho = 4 p (1-p) kappa^2 (1-g^2) / ((1+kappa^2)^2 - (2 kappa g)^2)``."""
    if g >= 1.0 - NEAR_ONE:
        raise NearDependenceError(f"branch overlap {g} is numerically 1", eigenvalue=1.0 - g)
    denom = (1 + kappa**2) ** 2 - (2 * kappa * g) ** 2
    return 4 * p * (1 - p) * kappa**2 * (1 - g**2) / denom


def two_branch_detrho(spec: TwoBranchMixSpec) -> float:
    return detrho_closed_form(spec.kappa, spec.p, spec.g)


def two_branch_eigenvalues(det: float) -> np.ndarray:
    """Spectrum ``(1 +- sqrt(1 - 4 det)) / 2`` of a unit-trace 2x2 density matrix."""
    disc = np.sqrt(max(1.0 - 4.0 * det, 0.0))
    return np.array([0.5 * (1 + disc), 0.5 * (1 - disc)])


def two_branch_effective_state(kappa: float, p: float, g: float) -> EffectiveState:
    """Numeric route: assemble the 2x2 Löwdin-basis matrix from the Gram matrix."""
    manifold = BranchManifold.from_gram([[1.0, g], [g, 1.0]])
    mix = SupportedMixture(([1.0, kappa], [1.0, -kappa]), [1.0 - p, p])
    return effective_density(manifold, mix)


def two_branch_entropy(spec: TwoBranchMixSpec) -> float:
    return entropy_from_spectrum(two_branch_eigenvalues(two_branch_detrho(spec)))


def mixture_moments(spec: TwoBranchMixSpec) -> MomentSummary:
    """Moments of the dephased two-branch state."""
    cross = cross_moments(spec.g1, spec.g2).rephased(spec.gauge)
    plus = _superposition_moments(spec.g1, spec.g2, 1.0, spec.kappa, cross)
    if spec.p == 0:
        return plus
    minus = _superposition_moments(spec.g1, spec.g2, 1.0, -spec.kappa, cross)
    return MomentSummary.mix([1 - spec.p, spec.p], [plus, minus])


def non_gaussianity(spec: TwoBranchMixSpec) -> float:
    """``S(tau) - S(rho)`` for the dephased two-branch state.

    Raises:
        InvalidStateError: if the difference is below ``-1e-10``.
    """
    if spec.kappa == 0:
        # rho is the pure Gaussian g1; numerically nu = 1/2 + O(eps) would leak eps*log(eps)
        return 0.0
    delta = gaussian_reference_entropy(mixture_moments(spec)) - two_branch_entropy(spec)
    if delta < -1e-10:
        raise InvalidStateError(f"negative non-Gaussianity {delta:.3e}")
    return max(delta, 0.0)
