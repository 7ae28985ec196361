"""Exception hierarchy shared by every module in the package."""


class XXBellError(Exception):
    """Base class for all package errors."""


class InvalidChainError(XXBellError, ValueError):
    """Chain length or coupling list is unusable."""


class DimensionError(XXBellError, ValueError):
    """Operator, state or angle shapes do not agree."""


class ConvergenceError(XXBellError, RuntimeError):
    """A numerical routine failed to converge."""


class NonFiniteError(XXBellError, FloatingPointError):
    """A NaN or infinity appeared where a finite number was required."""


class ThresholdSearchError(XXBellError, RuntimeError):
    """Temperature scan could not bracket or resolve a threshold."""
