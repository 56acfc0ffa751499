"""Parameter sweeps for the two-branch non-Gaussianity and Bell-negativity families.

Grid points are independent; :func:`run_grid` farms them out to a process
pool and returns results in input order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .diagnostics import TwoBranchMixSpec, non_gaussianity
from .entanglement import TwoBranchBellSpec, bell_effective_matrix, negativity_numeric, BipartiteEffectiveState
from .errors import GaussManifoldError, InvalidParameterError
from .gaussian_core import displaced_squeezed
from .manifold import BranchManifold


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid; the endpoint is kept when it lies on the grid."""
    if step <= 0 or stop < start:
        raise InvalidParameterError(f"bad grid [{start}, {stop}] step {step}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def cat_pair(alpha: float, r: float = 0.0, theta1: float = 0.0, theta2: float | None = None):
    """``D(+alpha) S(r, theta1)|0>`` and ``D(-alpha) S(r, theta2)|0>``."""
    theta2 = theta1 if theta2 is None else theta2
    return displaced_squeezed(alpha, r, theta1), displaced_squeezed(-alpha, r, theta2)


def nongauss_point(alpha, kappa, p, r=0.0, theta=0.0) -> float:
    g1, g2 = cat_pair(alpha, r, theta)
    return non_gaussianity(TwoBranchMixSpec(g1, g2, kappa, p))


def negativity_point(alpha, r, phi, p, theta1=0.0, theta2=None, pseudo_inverse_cutoff=0.0) -> float:
    """Negativity of the Bell-like encoding with the same cat pair on both parties.

    Only ``G^{1/2}`` enters the effective state, so a pseudo-inverse cutoff
    (default 0) keeps coincident branches (``a = 1``) well defined; they
    give a product state.
    """
    g1, g2 = cat_pair(alpha, r, theta1, theta2)
    spec = TwoBranchBellSpec(g1, g2, g1, g2, phi, p)
    ma = BranchManifold.from_gram([[1.0, spec.a], [spec.a, 1.0]], pseudo_inverse_cutoff=pseudo_inverse_cutoff)
    mb = BranchManifold.from_gram([[1.0, spec.b], [spec.b, 1.0]], pseudo_inverse_cutoff=pseudo_inverse_cutoff)
    return negativity_numeric(BipartiteEffectiveState(bell_effective_matrix(ma, mb, spec.phi, spec.p), ma, mb))


def _labelled(func, point):
    try:
        return func(**point)
    except GaussManifoldError as exc:
        label = ", ".join(f"{k}={v!r}" for k, v in point.items())
        exc.args = (f"at grid point ({label}): {exc.args[0] if exc.args else exc}",) + exc.args[1:]
        raise


def _call(args):
    func, point = args
    return _labelled(func, point)


def run_grid(func, points, threads: int = 1) -> list:
    """Evaluate ``func(**point)`` on every point, preserving order."""
    jobs = [(func, p) for p in points]
    if threads <= 1 or len(jobs) < 2:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_call, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


def nongauss_sweep(kappas, alphas, p, r=0.0, theta=0.0, threads=1):
    """Rows ``(alpha, kappa, delta_nG)`` with kappa outer and alpha inner."""
    points = [dict(alpha=float(a), kappa=float(k), p=p, r=r, theta=theta) for k in kappas for a in alphas]
    values = run_grid(nongauss_point, points, threads)
    return [(pt["alpha"], pt["kappa"], v) for pt, v in zip(points, values)]


def negativity_sweep(alphas, rs, phi, p, theta1=0.0, theta2=None, pseudo_inverse_cutoff=0.0, threads=1):
    """Rows ``(alpha, r, N)`` with alpha outer and r inner."""
    points = [
        dict(alpha=float(a), r=float(r), phi=phi, p=p, theta1=theta1, theta2=theta2, pseudo_inverse_cutoff=pseudo_inverse_cutoff)
        for a in alphas
        for r in rs
    ]
    values = run_grid(negativity_point, points, threads)
    return [(pt["alpha"], pt["r"], v) for pt, v in zip(points, values)]
