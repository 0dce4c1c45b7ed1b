"""Exception hierarchy shared across the package."""


class FsgSenseError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FsgSenseError):
    """Input lies outside the mathematical domain of an operation."""


class PhysicalityError(FsgSenseError):
    """A covariance matrix violates the Gaussian uncertainty relation."""


class InfeasibleError(FsgSenseError):
    """No isothermal state exists for the requested photon budget."""


class NumericalError(FsgSenseError):
    """A numeric routine failed to converge or lost conditioning."""


class ConvergenceError(FsgSenseError):
    """An iterative search stalled or terminated on a bracket boundary."""


class SingularError(FsgSenseError):
    """A Fisher matrix is numerically zero and cannot be inverted."""


class OutOfRangeError(FsgSenseError):
    """Requested weight vector leaves the range of a rank-deficient Fisher matrix."""


class UndefinedError(FsgSenseError):
    """The requested quantity is a 0/0 expression for this input."""


class DegenerateError(FsgSenseError):
    """The optimization objective vanishes identically."""
