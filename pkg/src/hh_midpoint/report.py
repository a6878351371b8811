"""Report rows and their CSV and JSON renderings.

Every number is written with 17 significant digits, so a report read back
reproduces the binary64 values exactly and two runs can be compared byte for
byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import aiofiles

from .kernel import KERNEL_GRID_STEP, kernel_table
from .types import PathLikeObject

CHECK_COLUMNS = (
    "name",
    "n",
    "reference",
    "rule_value",
    "remainder",
    "identity_residual",
    "actual_error",
    "bound_convex",
    "bound_holder_best",
    "bound_powermean_best",
    "kernel_bound",
    "best_theorem",
    "best_q",
    "identity_passed",
    "hypothesis_status",
)
"""Columns of the ``check`` report, in order."""

TABLE_COLUMNS = ("name", "n", "q", "actual_error", "eq3", "eq4", "eq7")
"""Columns of the bound comparison table, in order."""

KERNEL_COLUMNS = ("t", "value")


class HypothesisStatus(str, Enum):
    """What is known about a row's bounds."""

    GUARANTEED = "guaranteed"
    """The best bound's hypothesis was certified, and it dominates."""

    OBSERVED = "observed"
    """The best bound's hypothesis was not certified; domination is not enforced."""

    VIOLATED = "violated"
    """A bound whose hypothesis was certified is smaller than the actual error."""


def format_number(value: float) -> str:
    """Formats a float with 17 significant digits and a lowercase exponent.

    Non-finite values are written ``nan``, ``inf`` and ``-inf``.
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _json_number(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


Cell = str | int | float | bool | None


def _csv_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def _json_cell(value: Cell) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _json_number(value)
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def _json_object(cells: Iterable[tuple[str, Cell]]) -> str:
    return (
        "{"
        + ", ".join(f"{json.dumps(key)}: {_json_cell(value)}" for key, value in cells)
        + "}"
    )


@dataclass(frozen=True)
class ReportRow:
    """The outcome of checking one corpus entry at one rule order."""

    name: str
    n: int
    reference: float
    rule_value: float
    remainder: float
    identity_residual: float
    actual_error: float
    bound_convex: float
    bound_holder_best: float
    """``nan`` if the q grid has no entry above 1."""

    bound_powermean_best: float
    kernel_bound: float
    """The error bound with no convexity hypothesis."""

    best_theorem: str
    best_q: float | None
    identity_passed: bool
    hypothesis_status: HypothesisStatus

    @property
    def best_bound(self) -> float:
        """The smallest of the three theorem bounds."""
        return min(
            value
            for value in (
                self.bound_convex,
                self.bound_holder_best,
                self.bound_powermean_best,
            )
            if not math.isnan(value)
        )

    def cells(self) -> list[tuple[str, Cell]]:
        """Returns ``(column, value)`` pairs in report order."""
        return [
            (column, getattr(self, column))
            if column != "hypothesis_status"
            else (column, self.hypothesis_status.value)
            for column in CHECK_COLUMNS
        ]


@dataclass(frozen=True)
class TableRow:
    """All three bounds for one entry, order and exponent."""

    name: str
    n: int
    q: float
    actual_error: float
    eq3: float
    """The convex bound."""

    eq4: float
    """The Hölder bound, ``nan`` at ``q = 1``."""

    eq7: float
    """The power-mean bound."""


@dataclass
class CheckReport:
    """Rows of a corpus check, together with the tolerances they were checked at."""

    tolerances: dict[str, float]
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True if every identity holds and no bound is violated."""
        return all(
            row.identity_passed
            and row.hypothesis_status is not HypothesisStatus.VIOLATED
            for row in self.rows
        )

    @property
    def exit_code(self) -> int:
        """0 if the check passed, else 1."""
        return 0 if self.passed else 1

    def failures(self) -> list[ReportRow]:
        """Returns the rows that make the check fail."""
        return [
            row
            for row in self.rows
            if not row.identity_passed
            or row.hypothesis_status is HypothesisStatus.VIOLATED
        ]

    def to_csv(self) -> str:
        """Renders this report as CSV, with the tolerances as ``#`` header lines."""
        buffer = io.StringIO()
        for key, value in self.tolerances.items():
            buffer.write(f"# {key}={format_number(value)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CHECK_COLUMNS)
        for row in self.rows:
            writer.writerow(_csv_cell(value) for _, value in row.cells())
        return buffer.getvalue()

    def to_json(self) -> str:
        """Renders this report as JSON, with the same number text as the CSV."""
        tolerances = _json_object(
            (key, float(value)) for key, value in self.tolerances.items()
        )
        rows = ",\n    ".join(_json_object(row.cells()) for row in self.rows)
        if rows:
            rows = f"\n    {rows}\n  "
        return f'{{\n  "tolerances": {tolerances},\n  "rows": [{rows}]\n}}\n'

    def render(self, format: str) -> str:
        """Renders as ``csv`` or ``json``."""
        if format == "csv":
            return self.to_csv()
        elif format == "json":
            return self.to_json()
        else:
            raise ValueError(f"unknown report format: {format}")


def table_csv(rows: Sequence[TableRow]) -> str:
    """Renders bound comparison rows as CSV.

    An empty sequence gives just the header.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.name,
                str(row.n),
                format_number(row.q),
                format_number(row.actual_error),
                format_number(row.eq3),
                format_number(row.eq4),
                format_number(row.eq7),
            ]
        )
    return buffer.getvalue()


def kernel_csv(n: int, step: float = KERNEL_GRID_STEP) -> str:
    """Renders ``M_n`` sampled on ``[0, 1]`` as ``t,value`` CSV."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(KERNEL_COLUMNS)
    for t, value in kernel_table(n, step):
        writer.writerow([format_number(t), format_number(value)])
    return buffer.getvalue()


async def write_text(path: PathLikeObject, text: str) -> Path:
    """Writes text to a file, creating parent directories.

    Returns:
        Path: The path that was written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, mode="w", encoding="utf-8", newline="") as f:
        await f.write(text)
    return path
