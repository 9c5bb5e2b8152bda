"""Exception types shared across the package."""


class P1Error(Exception):
    """Base class for package errors."""


class InvalidArgument(P1Error, ValueError):
    pass


class InvalidVariant(P1Error, ValueError):
    """Operation is undefined for the requested reciprocation variant."""


class EmptyMoveError(P1Error, ValueError):
    """A move composition cancelled completely."""


class CapacityError(P1Error, RuntimeError):
    """Problem size exceeds a configured cap."""


class InfeasibleStatistic(P1Error, ValueError):
    """The statistic is not in the marginal cone."""


class ConvergenceError(P1Error, RuntimeError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
