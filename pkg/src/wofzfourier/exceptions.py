"""
Exception hierarchy for wofzfourier.

Every error raised on purpose by the package derives from WofzError, so
callers (the CLI in particular) can catch one type. Each subclass also
derives from the closest builtin so generic handlers keep working.
"""

from typing import Optional


class WofzError(Exception):
    """Base class for all wofzfourier errors."""


class InvalidParameterError(WofzError, ValueError):
    """A construction or configuration parameter is out of range."""


class IndexOutOfRangeError(WofzError, IndexError):
    """A series index lies outside the coefficient table."""


class DomainError(WofzError, ValueError):
    """The argument lies outside the domain of the requested formula."""


class WofzOverflowError(WofzError, OverflowError):
    """The result magnitude is not representable as a double."""


class OracleRangeError(WofzError, ValueError):
    """The argument lies outside the validity range of an oracle method."""


class OracleConvergenceError(WofzError, ArithmeticError):
    """An oracle method did not converge within its depth limit."""


class InconsistentOracleError(WofzError, ArithmeticError):
    """Two independent oracle methods disagree."""


class EmptyMapError(WofzError, ValueError):
    """An error map holds no finite entries."""


class RowError(WofzError, ValueError):
    """An input row could not be used."""

    def __init__(self, message: str, row: Optional[int] = None):
        """
        Initialize the error.

        Args:
            message: Human readable description
            row: 1-based data row number, if the error belongs to a row
        """
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class BatchParseError(RowError):
    """A batch input file is malformed."""


class LineListError(RowError):
    """A line-list row could not be turned into a spectral line."""


class LineParseError(LineListError):
    """A line-list row is malformed."""


class InvalidLineError(LineListError):
    """Spectral line parameters violate their invariants."""
