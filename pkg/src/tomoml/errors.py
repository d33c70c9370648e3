"""Exception types raised by tomoml."""


class TomographyError(Exception):
    """Base class for all tomoml errors."""


class DimensionError(TomographyError, ValueError):
    """Operand dimensions are invalid or do not agree."""


class NotHermitianError(TomographyError, ValueError):
    pass


class InvalidStateError(TomographyError, ValueError):
    """A density matrix, POVM or dataset violates its defining constraints."""


class BoundaryLikelihoodError(TomographyError, ArithmeticError):
    """An outcome with positive frequency has (numerically) zero probability.

    The log-likelihood is minus infinity there, which means the iterate sits
    on the boundary of the state space in a direction the data forbids.
    """


class ConditioningError(TomographyError, ArithmeticError):
    pass


class NumericalError(TomographyError, ArithmeticError):
    """Non-finite values or a failed numerical routine.

    When raised from the solver, ``log`` carries the iteration log up to the
    failure.
    """

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log
