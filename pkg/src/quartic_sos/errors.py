"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class QuarticSOSError(Exception):
    """Base class for every error raised by this package."""


class BudgetExceeded(QuarticSOSError):
    """A computational budget ran out before an exact answer was reached.

    ``partial`` carries whatever diagnostic state the caller had collected
    (for ``decompose`` this is the ladder trace so far).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DegreeBudgetExceeded(BudgetExceeded):
    """An algebraic number would need a defining polynomial above the limit."""


class RefinementBudgetExceeded(BudgetExceeded):
    """Interval bisection did not separate a value from zero in time."""


class NotPSDError(QuarticSOSError):
    """The input takes a negative value; ``witness`` is a point where it does."""

    def __init__(self, message: str, witness=None, value=None):
        super().__init__(message)
        self.witness = witness
        self.value = value


class InternalError(QuarticSOSError):
    """A state that the mathematics says is unreachable for valid input."""


class DegenerateSystem(QuarticSOSError):
    """An elimination collapsed to the zero polynomial."""
