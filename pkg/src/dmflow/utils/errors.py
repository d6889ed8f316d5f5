"""Error kinds raised by dmflow.

All of them are ``ValueError`` subclasses so callers that only care about "bad input"
can keep catching ``ValueError``.
"""

from typing import Optional


class ConfigurationError(ValueError):
    """A scenario or argument value violates its schema or an invariant.

    ``key`` is the dotted config key (or argument name) at fault, ``line`` the 1-based
    line of the config file when the failure is a parse error.
    """

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        prefix = ""
        if key is not None:
            prefix = f"{key}: "
        if line is not None:
            prefix = f"line {line}: {prefix}"
        super().__init__(f"{prefix}{message}")


class IllConditionedGeometryError(ValueError):
    """The Bob steering matrix is too close to rank deficient for zero forcing."""

    def __init__(self, message: str, column_pair: tuple[int, int], condition: float):
        self.column_pair = column_pair
        self.condition = condition
        super().__init__(message)


class FramingError(ValueError):
    """Bit or sample counts do not line up with symbol or block boundaries."""


class DegenerateBaselineError(ValueError):
    """The AN-DM baseline has no null space to put artificial noise in."""
