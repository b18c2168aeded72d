"""Exception hierarchy shared by all modules."""


class HankelDmdError(Exception):
    """Base class for every error raised by this package."""


class DataError(HankelDmdError, ValueError):
    """Input data is malformed, inconsistent or too short."""


class TrajectoryTooShortError(DataError):
    def __init__(self, required, actual, what="trajectory"):
        self.required = required
        self.actual = actual
        super().__init__(f"{what} has {actual} samples, at least {required} are required")


class NumericalError(HankelDmdError, ArithmeticError):
    """A numerical kernel failed (non-convergence, empty model, rank deficiency)."""


class PropagationError(NumericalError):
    def __init__(self, message, t=None):
        self.t = t
        if t is not None:
            message = f"{message} (t = {t:.6g} s)"
        super().__init__(message)
