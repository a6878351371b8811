from dataclasses import dataclass


@dataclass
class Message:
    """A message about checking a corpus."""


@dataclass
class StartCheck(Message):
    """Sent when a check of one entry at one order starts."""

    name: str
    """The corpus entry name."""

    n: int
    """The rule order."""


@dataclass
class FinishCheck(Message):
    """Sent when a check finishes, whatever its outcome."""

    name: str
    """The corpus entry name."""

    n: int
    """The rule order."""

    status: str
    """The row's hypothesis status, e.g. ``guaranteed``."""


@dataclass
class ErrorCheck(Message):
    """Sent when a check fails with a numeric error."""

    name: str
    """The corpus entry name."""

    n: int
    """The rule order."""

    error: Exception
    """The error."""
