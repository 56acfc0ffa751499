import numpy as np
import pytest

from gaussmanifold.gaussian_core import GaussianPure, make_displaced_squeezed


def random_single_mode(rng, dmax=1.5, rmax=0.5):
    x0, p0 = rng.uniform(-dmax, dmax, 2)
    return make_displaced_squeezed(1, [(x0, p0, rng.uniform(-rmax, rmax), rng.uniform(0, 2 * np.pi))])


def _passive_symplectic(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    u, _ = np.linalg.qr(z)
    s_xxpp = np.block([[u.real, -u.imag], [u.imag, u.real]])
    perm = np.ravel(np.column_stack([np.arange(n), np.arange(n, 2 * n)]))
    return s_xxpp[np.ix_(perm, perm)]


def random_multimode(rng, n, dmax=1.5, rmax=0.5):
    """Random pure Gaussian with mode correlations (squeezers followed by an interferometer)."""
    params = [(0.0, 0.0, rng.uniform(-rmax, rmax), rng.uniform(0, np.pi)) for _ in range(n)]
    g = make_displaced_squeezed(n, params)
    s = _passive_symplectic(rng, n)
    return GaussianPure(rng.uniform(-dmax, dmax, 2 * n), s @ g.V @ s.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
