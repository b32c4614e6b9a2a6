"""Exception types shared across the package."""


class OaconeError(Exception):
    """Base class for errors raised by this package."""


class DesignMismatchError(OaconeError):
    """Operands belong to different designs or have wrong dimensions."""


class EmptyFractionError(OaconeError):
    """The fraction has no runs, so the requested quantity is undefined."""


class NotACountingFunctionError(OaconeError):
    """A coefficient table does not reconstruct to nonnegative integer counts."""


class StrengthPreconditionError(OaconeError):
    """An operation required a minimum OA strength that the input lacks."""


class NotAMemberError(OaconeError):
    """A vector is not a lattice point of the orthogonal-array cone."""


class FileFormatError(OaconeError):
    """An input file violates one of the documented plain-text formats."""


class BudgetExceededError(OaconeError):
    """The Hilbert-basis search hit its resource budget.

    Carries the size of the search frontier at the moment the budget was
    exceeded; no partial basis is ever returned.
    """

    def __init__(self, message: str, frontier_size: int):
        super().__init__(message)
        self.frontier_size = frontier_size
