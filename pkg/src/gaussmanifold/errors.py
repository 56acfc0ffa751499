"""Exception hierarchy.

Every error raised by the library derives from :class:`GaussManifoldError`.
The CLI maps the three families below onto distinct exit codes.
"""


class GaussManifoldError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(GaussManifoldError, ValueError):
    """A scalar or vector parameter is out of its allowed domain."""


class DimensionError(GaussManifoldError, ValueError):
    """Operands disagree in mode count or array shape."""


class UnsupportedDimensionError(DimensionError):
    """The operation only exists for a restricted number of modes."""


class UnphysicalStateError(GaussManifoldError, ValueError):
    """Input violates a physicality constraint (purity, uncertainty, PSD...)."""


class UnphysicalCovarianceError(UnphysicalStateError):
    """A covariance matrix has a symplectic eigenvalue below 1/2."""


class DegenerateCovarianceError(UnphysicalStateError):
    """The position block of a covariance matrix is numerically singular."""


class InvalidStateError(UnphysicalStateError):
    """An effective density matrix is not Hermitian, unit-trace and PSD."""


class DegeneratePairError(GaussManifoldError, ArithmeticError):
    """The Gaussian integral for a pair of branches has a vanishing determinant."""


class DestructiveInterferenceError(GaussManifoldError, ArithmeticError):
    """A superposition has (numerically) zero norm."""


class DegenerateStateError(DestructiveInterferenceError):
    """A two-branch Bell-like normalization vanishes."""


class NearDependenceError(GaussManifoldError, ArithmeticError):
    """The branch family is numerically linearly dependent.

    Attributes:
        eigenvalue: the offending (smallest) Gram eigenvalue.
        threshold: the threshold it failed against.
    """

    def __init__(self, message, eigenvalue=None, threshold=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.threshold = threshold


class InsufficientCutoffError(GaussManifoldError):
    """A truncated Fock expansion leaks more norm than the caller allows."""

    def __init__(self, message, deficit=None):
        super().__init__(message)
        self.deficit = deficit
