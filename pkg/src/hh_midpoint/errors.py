from __future__ import annotations

from typing import Any


class ParseError(ValueError):
    """Raised when an expression cannot be parsed."""

    offset: int
    """Byte offset into the UTF-8 encoded source where the error was found."""

    source: str
    """The expression source."""

    def __init__(self, message: str, source: str, offset: int) -> None:
        self.source = source
        self.offset = offset
        super().__init__(f"{message} at byte offset {offset}: {source!r}")


class DomainError(ValueError):
    """Raised when a function is evaluated outside of its domain."""

    point: float | None
    """The offending point, if known."""

    def __init__(self, message: str, point: float | None = None) -> None:
        self.point = point
        if point is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} at x={point!r}")


class OrderError(ValueError):
    """Raised if a rule order or a derivative order is out of range."""


class ConvergenceError(ArithmeticError):
    """Raised when a numerical integration does not reach its tolerance."""


class ConfigError(Exception):
    """Raised if the configuration or a corpus file is not valid."""


class HypothesisWarning(Warning):
    """A warning for when a bound's convexity hypothesis could not be certified.

    The bound is still reported, but its domination is only observed, not
    guaranteed.
    """


class NumericError(Exception):
    """A collection of numeric failures encountered while checking a corpus."""

    exceptions: list[Exception]

    def __init__(self, exceptions: list[Exception], *args: Any, **kwargs: Any) -> None:
        self.exceptions = exceptions
        messages = list()
        for exception in exceptions:
            messages.append(f"{type(exception).__name__}: {exception}")
        super().__init__("\n".join(messages), *args, **kwargs)
