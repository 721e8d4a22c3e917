"""Exception hierarchy shared by every module."""


class DegenPairError(Exception):
    """Base class for all errors raised by this package."""


class ParameterDomainError(DegenPairError, ValueError):
    """A parameter lies outside the domain an operation accepts."""


class DivergenceError(DegenPairError):
    """An integral that should be finite grows with the truncation radius."""


class QuadratureError(DegenPairError):
    """Quadrature did not reach the requested tolerance.

    Attributes
    ----------
    estimate : float
        Achieved absolute error estimate.
    """

    def __init__(self, message, estimate):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


class ResolutionError(DegenPairError):
    """The sampling grid or integration step is too coarse."""


class UnsupportedLimitError(DegenPairError):
    """The profile has no finite asymptote of f''/f."""


class ConvergenceError(DegenPairError):
    """An iterative numerical procedure failed to converge."""
