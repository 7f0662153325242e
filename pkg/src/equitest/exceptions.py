"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for I/O and parsing problems, 2 for violated statistical preconditions and
3 for numerical non-convergence.
"""


class EquitestError(Exception):
    exit_code = 2


class InputError(EquitestError, ValueError):
    """Malformed input data or request (parsing, columns, shapes)."""

    exit_code = 1


class NonFiniteInputError(EquitestError, ValueError):
    pass


class TooFewObservationsError(EquitestError, ValueError):
    pass


class RankDeficientError(EquitestError, ValueError):
    pass


class DegenerateFitError(EquitestError, ValueError):
    """Residual sum of squares vanished, so R^2 = 1 and no test is defined."""


class IndexOutOfRangeError(EquitestError, IndexError):
    pass


class InvalidMarginError(EquitestError, ValueError):
    pass


class InfeasibleMarginError(InvalidMarginError):
    def __init__(self, message, max_feasible=None):
        super().__init__(message)
        self.max_feasible = max_feasible


class InvalidThresholdError(EquitestError, ValueError):
    pass


class InfeasibleDesignError(EquitestError, ValueError):
    pass


class InfeasibleCorrelationError(EquitestError, ValueError):
    pass


class NonConvergenceError(EquitestError, ArithmeticError):
    exit_code = 3


class QuadratureFailure(NonConvergenceError):
    pass
