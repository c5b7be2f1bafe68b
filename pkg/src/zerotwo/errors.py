"""Exception and warning types raised across the package."""


class ZeroTwoError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ZeroTwoError, ValueError):
    pass


class PreconditionError(ZeroTwoError, ValueError):
    """An operation's documented precondition was checked and does not hold."""


class SingularMatrixError(ZeroTwoError, ArithmeticError):
    pass


class NotInResolventSetError(SingularMatrixError):
    """The requested point lies (numerically) in the spectrum."""


class ConvergenceError(ZeroTwoError, RuntimeError):
    def __init__(self, message, iterations):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class ScalingRangeError(ZeroTwoError, OverflowError):
    """Series scaling cannot bring the argument into range."""


class DegenerateRegionError(InvalidInputError):
    pass


class AccuracyWarning(UserWarning):
    """Quadrature refinement did not settle within tolerance."""
