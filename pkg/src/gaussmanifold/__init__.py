"""Finite effective descriptions of superpositions and mixtures of pure Gaussian states.

Branches are pure Gaussian states given by their first moments and covariance
matrix. Overlaps and cross moments come from closed-form Gaussian integrals,
the branch span is orthogonalised symmetrically (Löwdin), and entropies,
non-Gaussianity and negativity are read off small effective matrices.
"""

from .diagnostics import (
    MomentSummary,
    TwoBranchMixSpec,
    gaussian_reference_entropy,
    non_gaussianity,
    renyi_entropy,
    superposition_moments,
    two_branch_detrho,
    von_neumann_entropy,
)
from .entanglement import (
    BipartiteEffectiveState,
    TwoBranchBellSpec,
    build_bipartite_effective,
    negativity_closed_form,
    negativity_numeric,
    partial_transpose_B,
    schmidt_spectrum,
)
from .errors import GaussManifoldError, NearDependenceError
from .gaussian_core import (
    GaussianPure,
    coherent,
    cross_characteristic,
    cross_moments,
    displaced_squeezed,
    make_displaced_squeezed,
    overlap,
    vacuum,
    wavefunction_params,
)
from .manifold import (
    BranchManifold,
    EffectiveState,
    SupportedMixture,
    build_manifold,
    circulant_gram_spectrum,
    effective_density,
    generalized_spectrum,
    lowdin_coefficients,
)

__all__ = [
    "BipartiteEffectiveState",
    "BranchManifold",
    "EffectiveState",
    "GaussManifoldError",
    "GaussianPure",
    "MomentSummary",
    "NearDependenceError",
    "SupportedMixture",
    "TwoBranchBellSpec",
    "TwoBranchMixSpec",
    "build_bipartite_effective",
    "build_manifold",
    "circulant_gram_spectrum",
    "coherent",
    "cross_characteristic",
    "cross_moments",
    "displaced_squeezed",
    "effective_density",
    "gaussian_reference_entropy",
    "generalized_spectrum",
    "lowdin_coefficients",
    "make_displaced_squeezed",
    "negativity_closed_form",
    "negativity_numeric",
    "non_gaussianity",
    "overlap",
    "partial_transpose_B",
    "renyi_entropy",
    "schmidt_spectrum",
    "superposition_moments",
    "two_branch_detrho",
    "vacuum",
    "von_neumann_entropy",
    "wavefunction_params",
]

__version__ = "0.1.0"
