"""Gram matrices, symmetric (Löwdin) orthogonalization and effective density matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvalidParameterError, InvalidStateError, NearDependenceError
from .gaussian_core import GaussianPure, overlap

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-10


def default_threshold(dim: int) -> float:
    return 1e-10 * dim


def gram_matrix(branches: Sequence[GaussianPure]) -> np.ndarray:
    dim = len(branches)
    gram = np.eye(dim, dtype=complex)
    for j in range(dim):
        for k in range(j + 1, dim):
            gram[j, k] = overlap(branches[j], branches[k])
            gram[k, j] = np.conj(gram[j, k])
    return gram


def _square_roots(gram, threshold, pseudo_inverse_cutoff):
    eigval, eigvec = np.linalg.eigh(gram)
    lam_min = float(eigval[0])
    if pseudo_inverse_cutoff is None:
        if lam_min <= threshold:
            raise NearDependenceError(
                f"branches are nearly dependent: smallest Gram eigenvalue {lam_min:.3e} <= {threshold:.1e}",
                eigenvalue=lam_min,
                threshold=threshold,
            )
        keep = np.ones_like(eigval, dtype=bool)
    else:
        keep = eigval > pseudo_inverse_cutoff
    clamped = np.clip(eigval, 0.0, None)
    root = np.where(keep, np.sqrt(clamped), 0.0)
    inv_root = np.where(keep, 1.0 / np.sqrt(np.where(keep, clamped, 1.0)), 0.0)
    sqrt = (eigvec * root) @ eigvec.conj().T
    inv_sqrt = (eigvec * inv_root) @ eigvec.conj().T
    return 0.5 * (sqrt + sqrt.conj().T), 0.5 * (inv_sqrt + inv_sqrt.conj().T), lam_min


@dataclass(frozen=True, eq=False)
class BranchManifold:
    """Ordered branch family with its Gram matrix and Löwdin factors.

    Build with :func:`build_manifold` (from branches) or
    :meth:`BranchManifold.from_gram` (from precomputed overlaps).
    """

    branches: tuple
    gram: np.ndarray
    gram_sqrt: np.ndarray
    gram_inv_sqrt: np.ndarray
    min_gram_eigenvalue: float
    pseudo_inverse_cutoff: float | None = None

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @classmethod
    def from_gram(cls, gram, conditioning_threshold=None, pseudo_inverse_cutoff=None, branches=()):
        """Manifold from a Hermitian unit-diagonal Gram matrix.

        Raises:
            InvalidParameterError: if ``gram`` is not Hermitian with unit diagonal.
            NearDependenceError: if its smallest eigenvalue is not above the
                threshold (default ``1e-10 * D``) and no pseudo-inverse
                cutoff was requested.
        """
        gram = np.array(gram, dtype=complex)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] == 0:
            raise DimensionError(f"Gram matrix must be square and non-empty, got {gram.shape}")
        if np.max(np.abs(gram - gram.conj().T)) > HERMITIAN_TOL:
            raise InvalidParameterError("Gram matrix is not Hermitian")
        if np.max(np.abs(np.diag(gram) - 1.0)) > HERMITIAN_TOL:
            raise InvalidParameterError("Gram matrix must have unit diagonal")
        gram = 0.5 * (gram + gram.conj().T)
        if conditioning_threshold is None:
            conditioning_threshold = default_threshold(gram.shape[0])
        sqrt, inv_sqrt, lam_min = _square_roots(gram, conditioning_threshold, pseudo_inverse_cutoff)
        for arr in (gram, sqrt, inv_sqrt):
            arr.flags.writeable = False
        return cls(tuple(branches), gram, sqrt, inv_sqrt, lam_min, pseudo_inverse_cutoff)

    def isometry_error(self) -> float:
        """``max |G^{-1/2} G G^{-1/2} - I|``."""
        eye = np.eye(self.dim)
        return float(np.max(np.abs(self.gram_inv_sqrt @ self.gram @ self.gram_inv_sqrt - eye)))


def build_manifold(branches: Sequence[GaussianPure], conditioning_threshold=None, pseudo_inverse_cutoff=None):
    """Gram matrix and Löwdin factors of a branch family.

    Args:
        branches: ``D >= 1`` branches with a common mode count.
        conditioning_threshold: reject when the smallest Gram eigenvalue is
            at or below this value (default ``1e-10 * D``).
        pseudo_inverse_cutoff: opt-in regularisation. Gram eigenvalues at or
            below the cutoff are dropped from both square roots instead of
            raising.
    """
    branches = tuple(branches)
    if not branches:
        raise DimensionError("need at least one branch")
    if len({b.n_modes for b in branches}) != 1:
        raise DimensionError("all branches must have the same number of modes")
    return BranchManifold.from_gram(
        gram_matrix(branches),
        conditioning_threshold=conditioning_threshold,
        pseudo_inverse_cutoff=pseudo_inverse_cutoff,
        branches=branches,
    )


def circulant_gram_spectrum(first_row_overlaps, threshold=None) -> np.ndarray:
    r"""Eigenvalues of a circulant Gram matrix by discrete Fourier transform.

    Args:
        first_row_overlaps: :math:`\langle g_0|U^k|g_0\rangle` for ``k = 0..D-1``.

    Returns:
        :math:`\lambda_m = \sum_k \langle g_0|U^k|g_0\rangle e^{-2\pi i mk/D}`,
        indexed by ``m`` (not sorted).
    """
    row = np.asarray(first_row_overlaps, dtype=complex).reshape(-1)
    dim = row.size
    if dim == 0:
        raise DimensionError("empty overlap sequence")
    if abs(row[0] - 1.0) > HERMITIAN_TOL:
        raise InvalidParameterError("first overlap must equal 1")
    lam = np.fft.fft(row)
    if np.max(np.abs(lam.imag)) > IMAG_RESIDUE_TOL:
        raise InvalidParameterError("overlap sequence does not define a Hermitian circulant Gram matrix")
    lam = lam.real
    if threshold is None:
        threshold = default_threshold(dim)
    if lam.min() <= threshold:
        raise NearDependenceError(
            f"circulant Gram eigenvalue {lam.min():.3e} <= {threshold:.1e}", eigenvalue=float(lam.min()), threshold=threshold
        )
    return lam


def rotation_orbit(g0: GaussianPure, dim: int):
    """Branches ``g_k = U^k g_0`` for ``U`` a phase-space rotation by ``2 pi / dim``.

    Only coherent fiducials keep the canonical gauge covariant under the
    rotation, so the Gram matrix is circulant only for those.
    """
    branches = []
    for k in range(dim):
        c, s = np.cos(2 * np.pi * k / dim), np.sin(2 * np.pi * k / dim)
        rot = np.kron(np.eye(g0.n_modes), np.array([[c, -s], [s, c]]))
        branches.append(GaussianPure(rot @ g0.d, rot @ g0.V @ rot.T))
    return branches


@dataclass(frozen=True, eq=False)
class SupportedMixture:
    """Finite mixture ``sum_mu p_mu |Psi c_mu><Psi c_mu| / Z_mu`` on a branch span."""

    coefficients: tuple
    weights: np.ndarray

    def __post_init__(self):
        coeffs = tuple(np.array(c, dtype=complex).reshape(-1) for c in self.coefficients)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if len(coeffs) != weights.size or not coeffs:
            raise DimensionError("need one weight per coefficient vector")
        if len({c.size for c in coeffs}) != 1:
            raise DimensionError("coefficient vectors must share a length")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidParameterError("weights must be nonnegative and sum to 1")
        if any(not np.any(c) for c in coeffs):
            raise InvalidParameterError("coefficient vectors must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def pure(cls, c):
        return cls((c,), [1.0])

    @property
    def dim(self) -> int:
        return self.coefficients[0].size


def _norm2(m: BranchManifold, c) -> float:
    z = float(np.real(np.conj(c) @ m.gram @ c))
    if z <= 1e-14 * float(np.real(np.vdot(c, c))):
        raise NearDependenceError(f"superposition has vanishing norm c^dag G c = {z:.3e}", eigenvalue=z)
    return z


def lowdin_coefficients(m: BranchManifold, c) -> np.ndarray:
    """Normalised coefficients ``G^{1/2} c / sqrt(c^dag G c)`` in the Löwdin basis."""
    c = np.asarray(c, dtype=complex).reshape(-1)
    if c.size != m.dim:
        raise DimensionError(f"coefficient vector has length {c.size}, manifold has D={m.dim}")
    if not np.any(c):
        raise InvalidParameterError("coefficient vector must be nonzero")
    return m.gram_sqrt @ c / np.sqrt(_norm2(m, c))


def clamp_spectrum(eigs, tol=PSD_TOL) -> np.ndarray:
    """Sort descending and zero eigenvalues in ``[-tol, 0)``.

    Raises:
        InvalidStateError: if any eigenvalue is below ``-tol``.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))[::-1]
    if eigs.size and eigs[-1] < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {eigs[-1]:.3e}")
    return np.where(eigs < 0, 0.0, eigs)


def validate_density(matrix) -> np.ndarray:
    """Check Hermiticity, unit trace and PSD; return the Hermitised matrix."""
    rho = np.asarray(matrix, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise InvalidStateError("density matrix is not Hermitian")
    rho = 0.5 * (rho + rho.conj().T)
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace {np.trace(rho).real:.12f} != 1")
    clamp_spectrum(np.linalg.eigvalsh(rho))
    return rho


@dataclass(frozen=True, eq=False)
class EffectiveState:
    """``D x D`` density matrix of a supported state in the Löwdin basis."""

    matrix: np.ndarray
    manifold: BranchManifold | None = field(default=None, repr=False)

    def __post_init__(self):
        rho = validate_density(self.matrix)
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> np.ndarray:
        """Clamped eigenvalues, sorted descending."""
        return clamp_spectrum(np.linalg.eigvalsh(self.matrix))


def mixture_operator(m: BranchManifold, mix: SupportedMixture) -> np.ndarray:
    """``X = sum_mu p_mu c_mu c_mu^dag / Z_mu``."""
    if mix.dim != m.dim:
        raise DimensionError(f"mixture has D={mix.dim}, manifold has D={m.dim}")
    X = np.zeros((m.dim, m.dim), dtype=complex)
    for p, c in zip(mix.weights, mix.coefficients):
        X += p * np.outer(c, c.conj()) / _norm2(m, c)
    return X


def effective_density(m: BranchManifold, mix: SupportedMixture) -> EffectiveState:
    """``rho = G^{1/2} X G^{1/2}``."""
    X = mixture_operator(m, mix)
    rho = m.gram_sqrt @ X @ m.gram_sqrt
    return EffectiveState(0.5 * (rho + rho.conj().T), m)


def generalized_spectrum(m: BranchManifold, mix: SupportedMixture) -> np.ndarray:
    """Eigenvalues of ``X G``, sorted descending.

    Needs neither square root of ``G``; it is the cross-route for
    :func:`effective_density`.
    """
    X = mixture_operator(m, mix)
    eigs = np.linalg.eigvals(X @ m.gram)
    if np.max(np.abs(eigs.imag)) > IMAG_RESIDUE_TOL:
        raise InvalidStateError("X G has non-real eigenvalues")
    return clamp_spectrum(eigs.real)
