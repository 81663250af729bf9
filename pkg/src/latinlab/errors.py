"""Exception hierarchy shared by every module."""


class LatinLabError(Exception):
    pass


class NotLatin(LatinLabError, ValueError):
    pass


class GroupTooLarge(LatinLabError, ValueError):
    pass


class OrderTooLarge(LatinLabError, ValueError):
    pass


class GroundMismatch(LatinLabError, ValueError):
    pass


class GroundTooLarge(LatinLabError, ValueError):
    pass


class DeltaOutOfRange(LatinLabError, ValueError):
    pass


class NotASystem(LatinLabError, ValueError):
    pass


class CellTooLarge(LatinLabError, ValueError):
    pass


class BadIrrepDims(LatinLabError, ValueError):
    pass


class NotClosed(LatinLabError, ValueError):
    pass


class BudgetExceeded(LatinLabError, RuntimeError):
    """A configured work or memory cap would be exceeded."""


class Infeasible(BudgetExceeded):
    pass


class Timeout(BudgetExceeded):
    pass


class NoConvergence(LatinLabError, RuntimeError):
    """Iterative eigen-estimation ran out of iterations.

    ``report`` carries the best estimate seen so far.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
