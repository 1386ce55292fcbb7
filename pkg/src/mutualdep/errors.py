"""Semantic exception hierarchy.

Every error raised by this package derives from :class:`MutualDepError`,
so callers can catch one base class. Where a builtin category fits
(ValueError, IndexError, ...), the error also derives from it.
"""

from __future__ import annotations


class MutualDepError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(MutualDepError, ValueError):
    """Array shapes are inconsistent with the declared block structure."""


class NonFiniteEntry(MutualDepError, ValueError):
    """Input contains NaN or infinite values; missing data is rejected."""


class TooFewRows(MutualDepError, ValueError):
    """At least two observations are required for any statistic."""


class IndexOutOfRange(MutualDepError, IndexError):
    """A block index lies outside 0..d-1."""


class DuplicateIndex(MutualDepError, ValueError):
    """The same block was selected more than once."""


class WrongBlockCount(MutualDepError, ValueError):
    """The statistic is defined only for a specific number of blocks."""


class NeedAtLeastTwoBlocks(MutualDepError, ValueError):
    """The statistic aggregates over pairs and needs d >= 2."""


class BudgetExceeded(MutualDepError, RuntimeError):
    """An exhaustive sum would exceed the elementary-term budget.

    Carries the required and allowed term counts so callers can report
    or enlarge the budget explicitly; nothing is ever silently subsampled.
    """

    def __init__(self, required: int, allowed: int, what: str = "statistic"):
        self.required = required
        self.allowed = allowed
        self.what = what
        super().__init__(
            f"{what} needs {required:,} elementary terms "
            f"but the budget allows {allowed:,}"
        )


class LengthMismatch(MutualDepError, ValueError):
    """Paired vectors have different lengths."""


class ZeroVariance(MutualDepError, ValueError):
    """A rank correlation is undefined for a constant input."""


class BlocksNotUnivariate(MutualDepError, ValueError):
    """Rank-based statistics require every block to be one-dimensional."""


class DimensionTooLarge(MutualDepError, ValueError):
    """Numerical quadrature is supported only for total dimension <= 2."""


class QuadratureNotConverged(MutualDepError, RuntimeError):
    """Adaptive refinement failed to reach the requested tolerance."""


class NotPositiveDefinite(MutualDepError, ValueError):
    """The requested covariance matrix is not positive definite."""


class RaggedRows(MutualDepError, ValueError):
    """CSV rows do not all have the same number of columns."""


class NonNumericCell(MutualDepError, ValueError):
    """A CSV cell could not be parsed as a number.

    ``row`` and ``column`` are 1-based, with ``row`` counting data rows
    (the header, if any, is row 0).
    """

    def __init__(self, row: int, column: int, text: str):
        self.row = row
        self.column = column
        self.text = text
        super().__init__(f"non-numeric cell {text!r} at row {row}, column {column}")


class LayoutNotRecognized(MutualDepError, ValueError):
    """The factors file does not match the expected annual-table layout."""


class YearRangeMissing(MutualDepError, ValueError):
    """The factors file does not cover the full 1964-2015 year range."""


class UnsupportedFormat(MutualDepError, ValueError):
    """Unknown report output format."""
