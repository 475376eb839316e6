"""Exception types shared across the package."""

from __future__ import annotations


class HomopixError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(HomopixError, ValueError):
    """A constructor or operation received arguments violating its contract."""


class ModelFormatError(HomopixError, ValueError):
    """A model/coloring file is malformed; message names the offending field."""


class NotHomogeneousError(HomopixError):
    """A model expected to be part-homogeneous is not.

    Carries the first conflicting pair of index tuples in row-major order:
    both have equal cell vectors and order patterns but different colors.
    """

    def __init__(self, first: tuple[int, ...], second: tuple[int, ...]):
        self.first = first
        self.second = second
        super().__init__(
            f"not part-homogeneous: tuples {first} and {second} share a cell "
            f"vector and order pattern but disagree"
        )


class CapExceededError(HomopixError):
    """An enumeration would exceed its explicit cap; nothing was truncated."""


class SearchBudgetError(HomopixError):
    """A sampling/search budget ran out before an acceptable result was found."""

    def __init__(self, message: str, report: object = None):
        self.report = report
        super().__init__(message)


class PartialColoringError(HomopixError, KeyError):
    """A coloring is undefined on a subset the search needed."""
