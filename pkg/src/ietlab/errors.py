"""Exception hierarchy shared by every ietlab module."""


class IETLabError(Exception):
    """Base class for all ietlab errors."""


class ReducibleInput(IETLabError, ValueError):
    """Rauzy induction was asked of a reducible permutation."""


class GoalUnreachable(IETLabError):
    """No permutation in the Rauzy class satisfies the requested goal."""


class OutOfDomain(IETLabError, ValueError):
    """A point lies outside [0, 1)."""


class DegenerateCoincidence(IETLabError):
    """The two rightmost discontinuities coincide, so induction is undefined.

    ``step`` is the number of induction steps completed before the failure.
    """

    def __init__(self, message, step=0):
        super().__init__(message)
        self.step = step


class InvalidSeed(IETLabError, ValueError):
    """A cone seed must be irrational and lie in (0, 1)."""


class ConventionUnresolved(IETLabError):
    """Neither labelling of the moves reproduces the printed path matrix."""


class BadParams(IETLabError, ValueError):
    pass


class BadInput(IETLabError, ValueError):
    pass


class SearchCapExceeded(IETLabError):
    """A bounded number-theoretic scan ran past its cap."""


class OrbitHitsDiscontinuity(IETLabError):
    """The orbit of a point meets a discontinuity inside the coding window."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class BudgetExceeded(IETLabError):
    pass


class OutOfRange(IETLabError, ValueError):
    pass


class InvalidDirection(IETLabError, ValueError):
    """An L-shaped table and direction give a nonpositive interval length."""


class ConstructionFailed(IETLabError):
    """The end-to-end construction did not verify; ``report`` holds diagnostics."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
