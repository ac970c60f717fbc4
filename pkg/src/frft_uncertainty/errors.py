"""Exception types raised by the library.

All of them subclass a builtin so callers that only care about
``ValueError`` / ``ArithmeticError`` keep working.
"""


class GridDataError(ValueError):
    """Sampled values are unusable (NaN/Inf, wrong shape)."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class NumericalError(ArithmeticError):
    """A computation produced non-finite output."""
