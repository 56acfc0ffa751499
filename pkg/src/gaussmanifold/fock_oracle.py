"""Brute-force truncated Fock-space backend.

This module exists to cross-check the closed-form pipeline at small
excitation. Nothing else in the library imports it except the ``verify``
CLI subcommand.

Branch vectors are returned in the same canonical position-space gauge that
:mod:`gaussmanifold.gaussian_core` uses, so overlaps can be compared
including their phase. For ``D(alpha) S(zeta)|0>`` the gauge factor is
``exp(i/2 * arg(cosh r - e^{i phi} sinh r))`` with ``zeta = r e^{i phi}``,
``phi = 2 theta``: the centred squeezed vacuum has position wavefunction
``(cosh r - e^{i phi} sinh r)^{-1/2} * (real positive Gaussian)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import xlogy

from .errors import DimensionError, InsufficientCutoffError, InvalidParameterError

ORACLE_DEFICIT = 1e-10


@dataclass(frozen=True, eq=False)
class FockVector:
    """Truncated number-basis amplitudes.

    Attributes:
        amplitudes: flattened amplitudes; multimode vectors are Kronecker
            products with mode 1 most significant.
        dims: per-mode local dimension (``cutoff + 1``).
        deficit: ``1 - |amplitudes|^2`` for normalised states, reported and
            never renormalised away.
    """

    amplitudes: np.ndarray
    dims: tuple
    deficit: float

    @property
    def cutoff(self) -> int:
        return self.dims[0] - 1


def gauge_phase(r: float, theta: float) -> complex:
    """Unit factor turning ``S(r e^{2i theta})|0>`` into the canonical gauge."""
    phi = 2.0 * theta
    z = np.cosh(r) - np.exp(1j * phi) * np.sinh(r)
    return complex(np.exp(0.5j * np.angle(z)))


def fock_displaced_squeezed(x0, p0, r, theta, cutoff, tolerance=ORACLE_DEFICIT) -> FockVector:
    """Amplitudes of ``D(alpha) S(zeta)|0>`` by the two-term recurrence.

    ``alpha = (x0 + i p0)/sqrt(2)`` and ``zeta = r e^{2 i theta}``, matching
    :func:`gaussmanifold.gaussian_core.make_displaced_squeezed`.

    The state is annihilated by ``(a - alpha) cosh r + (a^dag - alpha*) e^{i phi} sinh r``,
    which gives ``c_{n+1} = ((alpha + alpha* t) c_n - t sqrt(n) c_{n-1}) / sqrt(n+1)``
    with ``t = e^{i phi} tanh r``.

    Raises:
        InsufficientCutoffError: if ``1 - sum |c_n|^2 > tolerance``.
    """
    if cutoff < 1:
        raise InvalidParameterError("cutoff must be at least 1")
    if not np.all(np.isfinite([x0, p0, r, theta])):
        raise InvalidParameterError("parameters must be finite")
    alpha = (x0 + 1j * p0) / np.sqrt(2)
    t = np.exp(2j * theta) * np.tanh(r)
    c = np.zeros(cutoff + 1, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * t * np.conj(alpha) ** 2) / np.sqrt(np.cosh(r))
    lead = alpha + np.conj(alpha) * t
    for n in range(cutoff):
        prev = c[n - 1] if n else 0.0
        c[n + 1] = (lead * c[n] - t * np.sqrt(n) * prev) / np.sqrt(n + 1)
    c *= gauge_phase(r, theta)
    deficit = float(1.0 - np.vdot(c, c).real)
    if tolerance is not None and deficit > tolerance:
        raise InsufficientCutoffError(
            f"cutoff {cutoff} leaves truncation deficit {deficit:.2e} > {tolerance:.1e}", deficit
        )
    return FockVector(c, (cutoff + 1,), deficit)


def single_mode_parameters(d, V):
    """``(x0, p0, r, theta)`` of a pure single-mode Gaussian from its moments."""
    eigval, eigvec = np.linalg.eigh(np.asarray(V, dtype=float))
    r = 0.25 * np.log(eigval[1] / eigval[0])
    v = eigvec[:, 0]
    theta = np.arctan2(v[1], v[0]) % np.pi
    return float(d[0]), float(d[1]), float(r), float(theta)


def fock_branch(g, cutoff, tolerance=ORACLE_DEFICIT) -> FockVector:
    """Fock vector of a product-form :class:`GaussianPure` branch.

    Raises:
        InvalidParameterError: if the covariance couples different modes.
    """
    n = g.n_modes
    V = np.asarray(g.V)
    mask = np.kron(np.eye(n), np.ones((2, 2)))
    if np.max(np.abs(V * (1 - mask))) > 1e-12:
        raise InvalidParameterError("oracle only supports product (mode-uncorrelated) branches")
    amps = np.ones(1, dtype=complex)
    for k in range(n):
        params = single_mode_parameters(g.d[2 * k : 2 * k + 2], V[2 * k : 2 * k + 2, 2 * k : 2 * k + 2])
        amps = np.kron(amps, fock_displaced_squeezed(*params, cutoff, tolerance=tolerance).amplitudes)
    return FockVector(amps, (cutoff + 1,) * n, float(1.0 - np.vdot(amps, amps).real))


def ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = ladder(dim)
    return (a + a.conj().T) / np.sqrt(2), -1j * (a - a.conj().T) / np.sqrt(2)


def fock_overlap(v1: FockVector, v2: FockVector) -> complex:
    _check_dims(v1, v2)
    return complex(np.vdot(v1.amplitudes, v2.amplitudes))


def _check_dims(*vectors):
    if len({v.dims for v in vectors}) != 1:
        raise DimensionError("Fock vectors have different dimensions")


def displacement_operator(xi, dim: int, pad: int = 40) -> np.ndarray:
    """Truncated single-mode ``D(xi)`` built by exponentiating in a padded space."""
    eta, pi = xi
    beta = (eta + 1j * pi) / np.sqrt(2)
    a = ladder(dim + pad)
    full = expm(beta * a.conj().T - np.conj(beta) * a)
    return full[:dim, :dim]


def fock_characteristic(v1: FockVector, v2: FockVector, xi) -> complex:
    r""":math:`\langle v_1|D(\xi)|v_2\rangle` with the displacement acting mode by mode."""
    _check_dims(v1, v2)
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.size != 2 * len(v1.dims):
        raise DimensionError("xi length does not match mode count")
    op = np.ones((1, 1))
    for k, dim in enumerate(v1.dims):
        op = np.kron(op, displacement_operator(xi[2 * k : 2 * k + 2], dim))
    return complex(np.vdot(v1.amplitudes, op @ v2.amplitudes))


def fock_cross_moments(v1: FockVector, v2: FockVector):
    """``(overlap, r, M)`` between two single-mode vectors (same layout as the closed form)."""
    _check_dims(v1, v2)
    if len(v1.dims) != 1:
        raise DimensionError("cross moments are single mode")
    x, p = quadratures(v1.dims[0] + 2)
    a1 = np.pad(v1.amplitudes, (0, 2))
    a2 = np.pad(v2.amplitudes, (0, 2))
    ops = [x, p]

    def elem(op):
        return np.vdot(a1, op @ a2)

    r = np.array([elem(x), elem(p)])
    M = np.array([[0.5 * elem(A @ B + B @ A) for B in ops] for A in ops])
    return complex(np.vdot(a1, a2)), r, M


def fock_superposition(vectors, coeffs) -> np.ndarray:
    """Normalised ``sum_k c_k v_k`` as a plain amplitude array."""
    _check_dims(*vectors)
    psi = sum(c * v.amplitudes for c, v in zip(coeffs, vectors))
    return psi / np.linalg.norm(psi)


def fock_density(pure_states, weights) -> np.ndarray:
    """``sum_mu p_mu |psi_mu><psi_mu|`` for normalised amplitude arrays."""
    return sum(w * np.outer(psi, psi.conj()) for w, psi in zip(weights, pure_states))


def fock_spectrum(rho: np.ndarray) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))[::-1]


def fock_entropy(rho: np.ndarray) -> float:
    lam = np.clip(fock_spectrum(rho), 0.0, None)
    return float(-np.sum(xlogy(lam, lam)))


def fock_moments(rho: np.ndarray):
    """``(d, V)`` of a single-mode truncated density matrix."""
    dim = rho.shape[0]
    big = np.zeros((dim + 2, dim + 2), dtype=complex)
    big[:dim, :dim] = rho
    x, p = quadratures(dim + 2)
    ops = [x, p]
    d = np.array([np.trace(big @ op).real for op in ops])
    M = np.array([[0.5 * np.trace(big @ (A @ B + B @ A)).real for B in ops] for A in ops])
    return d, M - np.outer(d, d)


def fock_gaussian_entropy(V) -> float:
    nu = np.sqrt(max(np.linalg.det(V), 0.25))
    hi, lo = nu + 0.5, nu - 0.5
    return float(xlogy(hi, hi) - xlogy(lo, lo))


def fock_nongaussianity(rho: np.ndarray) -> float:
    _, V = fock_moments(rho)
    return fock_gaussian_entropy(V) - fock_entropy(rho)


def fock_partial_transpose(rho: np.ndarray, dims) -> np.ndarray:
    da, db = dims
    t = rho.reshape(da, db, da, db).transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def fock_negativity(rho: np.ndarray, dims, max_rank: int | None = None) -> float:
    """Sum of the absolute negative eigenvalues of the partial transpose on B.

    Args:
        max_rank: if given, the partial transpose is compressed onto its
            numerical range with a randomized range finder before
            diagonalisation. Much faster for large cutoffs when the state
            has low rank. The compression is checked to be exact.
    """
    pt = fock_partial_transpose(rho, dims)
    if max_rank is None:
        eigs = np.linalg.eigvalsh(pt)
    else:
        probe = np.random.default_rng(0).normal(size=(pt.shape[0], 2 * max_rank))
        q, _ = np.linalg.qr(pt @ probe)
        small = q.conj().T @ pt @ q
        residual = np.linalg.norm(pt @ q - q @ small) + np.linalg.norm(pt - q @ (q.conj().T @ pt))
        if residual > 1e-10 * max(1.0, np.linalg.norm(pt)):
            raise InvalidParameterError(f"partial transpose rank exceeds {2 * max_rank} (residual {residual:.2e})")
        eigs = np.linalg.eigvalsh(0.5 * (small + small.conj().T))
    return float(-eigs[eigs < 0].sum())
