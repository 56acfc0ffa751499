r"""Pure Gaussian branches and their closed-form Gaussian integrals.

Conventions used throughout the package:

* quadratures are ordered ``(x_1, p_1, ..., x_n, p_n)`` (xpxp ordering) with
  :math:`[\hat x, \hat p] = i`, i.e. :math:`\hbar = 1`;
* the vacuum covariance matrix is :math:`\tfrac12 I`;
* the symplectic form :math:`\Omega` is block diagonal with blocks
  ``[[0, 1], [-1, 0]]``;
* every branch ket carries the canonical position-space gauge
  :math:`\psi(x) = \mathcal N \exp(-\tfrac12 x^T A x + \beta^T x + \gamma)`
  with :math:`\mathcal N > 0`. Equivalently, the ket is the displacement
  :math:`D(d)` applied to a centred Gaussian whose wavefunction is real and
  positive at the origin;
* the Weyl operator :math:`D(\xi)`, :math:`\xi = (\eta_1, \pi_1, \ldots)`,
  displaces by :math:`\xi`:
  :math:`[D(\eta,\pi)\psi](x) = e^{i\pi^T(x - \eta/2)} \psi(x - \eta)`,
  i.e. :math:`D(\xi) = \exp(-i \xi^T \Omega R)`. For a single mode this is the
  usual :math:`D(\alpha)` with :math:`\alpha = (\eta + i\pi)/\sqrt2`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateCovarianceError,
    DegeneratePairError,
    DimensionError,
    InvalidParameterError,
    UnphysicalStateError,
    UnsupportedDimensionError,
)

SYMMETRY_TOL = 1e-12
UNCERTAINTY_TOL = 1e-10
PURITY_TOL = 1e-8
MAX_VXX_CONDITION = 1e14


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``n_modes`` modes (xpxp ordering)."""
    if n_modes < 1:
        raise InvalidParameterError(f"n_modes must be positive, got {n_modes}")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(cov: np.ndarray, pair_tol: float = 1e-10) -> np.ndarray:
    r"""Symplectic eigenvalues of a real symmetric covariance matrix.

    Computed from the spectrum of :math:`i\Omega V`, which comes in
    :math:`\pm\nu_k` pairs. Returned sorted ascending.

    Raises:
        UnphysicalStateError: if the spectrum does not pair up within
            ``pair_tol`` (relative to the largest eigenvalue).
    """
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    omega = symplectic_form(n)
    eigs = np.linalg.eigvals(1j * omega @ cov)
    if np.max(np.abs(eigs.imag)) > pair_tol * max(1.0, np.max(np.abs(eigs))):
        raise UnphysicalStateError("i*Omega*V has complex eigenvalues; V is not positive")
    eigs = np.sort(eigs.real)
    neg = -eigs[:n][::-1]
    pos = eigs[n:]
    if np.max(np.abs(neg - pos)) > pair_tol * max(1.0, pos.max()):
        raise UnphysicalStateError("symplectic spectrum does not pair into +/- nu")
    return 0.5 * (neg + pos)


def _xpxp_to_blocks(vec_or_mat):
    arr = np.asarray(vec_or_mat)
    if arr.ndim == 1:
        return arr[0::2], arr[1::2]
    return arr[0::2, 0::2], arr[0::2, 1::2], arr[1::2, 1::2]


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class GaussianPure:
    """An ``n``-mode pure Gaussian branch in the canonical gauge.

    Args:
        d: first moments, length ``2n``, xpxp ordering.
        V: covariance matrix, ``2n x 2n``, vacuum ``I/2``.

    Raises:
        DimensionError: on inconsistent shapes.
        UnphysicalStateError: if ``V`` is not symmetric, violates the
            uncertainty relation, or is not pure.
    """

    d: np.ndarray
    V: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        d = np.array(self.d, dtype=float).reshape(-1)
        V = np.array(self.V, dtype=float)
        if d.size % 2 or d.size == 0:
            raise DimensionError(f"first-moment vector must have even length, got {d.size}")
        n = d.size // 2
        if V.shape != (2 * n, 2 * n):
            raise DimensionError(f"covariance must be {2 * n}x{2 * n}, got {V.shape}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(V))):
            raise InvalidParameterError("moments must be finite")
        if np.max(np.abs(V - V.T)) > SYMMETRY_TOL:
            raise UnphysicalStateError("covariance matrix is not symmetric")
        V = 0.5 * (V + V.T)
        omega = symplectic_form(n)
        if np.linalg.eigvalsh(V + 0.5j * omega).min() < -UNCERTAINTY_TOL:
            raise UnphysicalStateError("covariance violates the uncertainty relation")
        det = np.linalg.det(V)
        if abs(det * 4.0**n - 1.0) > PURITY_TOL:
            raise UnphysicalStateError(f"state is not pure: det V = {det:.3e}, expected {4.0**-n:.3e}")
        nu = symplectic_eigenvalues(V)
        if np.max(np.abs(nu - 0.5)) > PURITY_TOL:
            raise UnphysicalStateError("state is not pure: symplectic eigenvalues differ from 1/2")
        d.flags.writeable = False
        V.flags.writeable = False
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "n_modes", n)

    @cached_property
    def wavefunction(self) -> "WavefunctionParams":
        return wavefunction_params(self)

    @property
    def mean_photon_number(self) -> float:
        return float(0.5 * (np.trace(self.V) + self.d @ self.d) - 0.5 * self.n_modes)

    def __repr__(self):
        return f"GaussianPure(n_modes={self.n_modes}, d={self.d.tolist()})"


def make_displaced_squeezed(n_modes: int, params: Sequence[Sequence[float]]) -> GaussianPure:
    """Product of single-mode displaced squeezed states.

    Args:
        n_modes: number of modes.
        params: one ``(x0, p0, r, theta)`` tuple per mode. Mode ``k`` gets
            ``V_k = R(theta) diag(e^{-2r}, e^{2r}) R(theta)^T / 2``, so ``theta``
            is the phase-space angle of the squeezed quadrature.
    """
    params = np.asarray(params, dtype=float)
    if params.ndim == 1:
        params = params[None, :]
    if params.shape != (n_modes, 4):
        raise DimensionError(f"expected {n_modes} (x0, p0, r, theta) tuples, got shape {params.shape}")
    if not np.all(np.isfinite(params)):
        raise InvalidParameterError("displaced-squeezed parameters must be finite")
    d = np.empty(2 * n_modes)
    V = np.zeros((2 * n_modes, 2 * n_modes))
    for k, (x0, p0, r, theta) in enumerate(params):
        rot = _rotation(theta)
        d[2 * k : 2 * k + 2] = x0, p0
        V[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = 0.5 * rot @ np.diag([np.exp(-2 * r), np.exp(2 * r)]) @ rot.T
    return GaussianPure(d, V)


def displaced_squeezed(alpha: complex = 0.0, r: float = 0.0, theta: float = 0.0) -> GaussianPure:
    """Single-mode ``D(alpha) S |0>`` with ``alpha = (x0 + i p0) / sqrt(2)``."""
    alpha = complex(alpha)
    return make_displaced_squeezed(1, [(np.sqrt(2) * alpha.real, np.sqrt(2) * alpha.imag, r, theta)])


def coherent(alpha: complex) -> GaussianPure:
    return displaced_squeezed(alpha)


def vacuum(n_modes: int = 1) -> GaussianPure:
    return GaussianPure(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))


def tensor(*branches: GaussianPure) -> GaussianPure:
    """Direct sum of moments, i.e. the tensor product of the kets.

    The canonical gauge factorises, so no phase is introduced.
    """
    d = np.concatenate([b.d for b in branches])
    n = d.size
    V = np.zeros((n, n))
    i = 0
    for b in branches:
        k = b.d.size
        V[i : i + k, i : i + k] = b.V
        i += k
    return GaussianPure(d, V)


@dataclass(frozen=True, eq=False)
class WavefunctionParams:
    r"""Position-space parameters of :math:`\mathcal N e^{-x^TAx/2 + \beta^Tx + \gamma}`."""

    A: np.ndarray
    beta: np.ndarray
    gamma: complex
    norm_prefactor: float

    @property
    def n_modes(self) -> int:
        return self.beta.size

    def to_moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Recover ``(d, V)`` in xpxp ordering."""
        a_re, a_im = self.A.real, self.A.imag
        vxx = 0.5 * np.linalg.inv(a_re)
        vxp = -vxx @ a_im
        vpp = 0.5 * a_re + a_im @ vxx @ a_im
        x0 = np.linalg.solve(a_re, self.beta.real)
        p0 = self.beta.imag - a_im @ x0
        n = self.n_modes
        d = np.empty(2 * n)
        d[0::2], d[1::2] = x0, p0
        V = np.empty((2 * n, 2 * n))
        V[0::2, 0::2] = vxx
        V[0::2, 1::2] = vxp
        V[1::2, 0::2] = vxp.T
        V[1::2, 1::2] = vpp
        return d, 0.5 * (V + V.T)


def wavefunction_params(g: GaussianPure) -> WavefunctionParams:
    """Canonical position-gauge parameters ``(A, beta, gamma, N)`` of a branch.

    Raises:
        DegenerateCovarianceError: if the position block of ``V`` has
            condition number above 1e14.
    """
    x0, p0 = _xpxp_to_blocks(g.d)
    vxx, vxp, _ = _xpxp_to_blocks(g.V)
    if np.linalg.cond(vxx) > MAX_VXX_CONDITION:
        raise DegenerateCovarianceError("position block of the covariance is singular")
    n = g.n_modes
    A = np.linalg.solve(vxx, 0.5 * np.eye(n) - 1j * vxp)
    A = 0.5 * (A + A.T)
    beta = A @ x0 + 1j * p0
    gamma = -0.5 * x0 @ A @ x0 - 0.5j * p0 @ x0
    norm = np.linalg.det(2 * np.pi * vxx) ** -0.25
    return WavefunctionParams(A, beta, complex(gamma), float(norm))


def _principal_logdet(S: np.ndarray) -> complex:
    # Eigenvalues of a complex symmetric matrix with Re S > 0 lie in the open
    # right half-plane, so summing principal logs follows the branch that is
    # continuous from real positive-definite S.
    eigs = np.linalg.eigvals(S)
    if np.min(np.abs(eigs)) < 1e-300:
        raise DegeneratePairError("Gaussian pair integral has a vanishing determinant")
    return complex(np.sum(np.log(eigs)))


def _check_pair(g1: GaussianPure, g2: GaussianPure):
    if g1.n_modes != g2.n_modes:
        raise DimensionError(f"mode count mismatch: {g1.n_modes} vs {g2.n_modes}")


def cross_characteristic(g1: GaussianPure, g2: GaussianPure, xi=None) -> complex:
    r"""Cross characteristic function :math:`\langle g_1|D(\xi)|g_2\rangle`.

    ``xi`` is ordered ``(eta_1, pi_1, ..., eta_n, pi_n)``; ``None`` means the
    origin, where the result is the overlap.
    """
    _check_pair(g1, g2)
    n = g1.n_modes
    w1, w2 = g1.wavefunction, g2.wavefunction
    beta2, gamma2 = w2.beta, w2.gamma
    if xi is not None:
        xi = np.asarray(xi, dtype=float).reshape(-1)
        if xi.size != 2 * n:
            raise DimensionError(f"xi must have length {2 * n}, got {xi.size}")
        eta, pi = xi[0::2], xi[1::2]
        gamma2 = gamma2 - beta2 @ eta - 0.5 * eta @ w2.A @ eta - 0.5j * pi @ eta
        beta2 = beta2 + w2.A @ eta + 1j * pi
    S = w1.A.conj() + w2.A
    B = w1.beta.conj() + beta2
    exponent = np.conj(w1.gamma) + gamma2 + 0.5 * B @ np.linalg.solve(S, B)
    log_val = 0.5 * n * np.log(2 * np.pi) - 0.5 * _principal_logdet(S) + exponent
    return complex(w1.norm_prefactor * w2.norm_prefactor * np.exp(log_val))


def overlap(g1: GaussianPure, g2: GaussianPure) -> complex:
    r""":math:`\langle g_1|g_2\rangle` in the canonical gauge."""
    return cross_characteristic(g1, g2)


def overlap_fidelity(g1: GaussianPure, g2: GaussianPure) -> float:
    r"""Squared overlap modulus from moments alone.

    :math:`|\langle g_1|g_2\rangle|^2 = e^{-\Delta d^T (V_1+V_2)^{-1} \Delta d / 2}
    / \sqrt{\det(V_1+V_2)}` in the vacuum-``I/2`` convention.
    """
    _check_pair(g1, g2)
    vs = g1.V + g2.V
    dd = g1.d - g2.d
    return float(np.exp(-0.5 * dd @ np.linalg.solve(vs, dd)) / np.sqrt(np.linalg.det(vs)))


def gaussian_characteristic(g: GaussianPure, xi) -> complex:
    r"""Characteristic function :math:`\mathrm{Tr}[\rho D(\xi)]` from ``(d, V)``.

    With the displacement convention of this module this is
    :math:`\exp(-\tfrac12 \xi^T\Omega V\Omega^T\xi - i\xi^T\Omega d)`.
    """
    xi = np.asarray(xi, dtype=float).reshape(-1)
    omega = symplectic_form(g.n_modes)
    w = omega.T @ xi
    return complex(np.exp(-0.5 * w @ g.V @ w - 1j * xi @ omega @ g.d))


@dataclass(frozen=True, eq=False)
class CrossMomentData:
    """Single-mode cross data between two branches.

    Attributes:
        overlap: ``<g1|g2>``.
        r: ``(<g1|x|g2>, <g1|p|g2>)``.
        M: symmetrised second cross moments ``<g1|{R_a, R_b}|g2> / 2``.
    """

    overlap: complex
    r: np.ndarray
    M: np.ndarray

    def rephased(self, phase: complex) -> "CrossMomentData":
        """Cross data after multiplying ``|g2>`` by the unit number ``phase``."""
        return CrossMomentData(self.overlap * phase, self.r * phase, self.M * phase)


def cross_moments(g1: GaussianPure, g2: GaussianPure) -> CrossMomentData:
    """Overlap and first/second cross moments of two single-mode branches."""
    _check_pair(g1, g2)
    if g1.n_modes != 1:
        raise UnsupportedDimensionError("cross moments are only available for single-mode branches")
    w1, w2 = g1.wavefunction, g2.wavefunction
    A2, b2 = w2.A[0, 0], w2.beta[0]
    S = np.conj(w1.A[0, 0]) + A2
    B = np.conj(w1.beta[0]) + b2
    if S.real <= 0:
        raise DegeneratePairError("Re(A1* + A2) must be positive")
    mu = B / S
    sigma = 1.0 / S
    g12 = overlap(g1, g2)
    x2 = sigma + mu**2
    r = g12 * np.array([mu, 1j * A2 * mu - 1j * b2])
    mxx = g12 * x2
    mxp = g12 * (1j * A2 * x2 - 1j * b2 * mu - 0.5j)
    mpp = g12 * (A2 - A2**2 * x2 + 2 * A2 * b2 * mu - b2**2)
    return CrossMomentData(g12, r, np.array([[mxx, mxp], [mxp, mpp]]))
