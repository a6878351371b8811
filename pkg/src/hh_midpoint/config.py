from __future__ import annotations

import copy
import math
import os
import sys
from collections.abc import Iterable
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .bounds import DEFAULT_Q_GRID
from .convexity import DEFAULT_CONVEXITY_TOLERANCE, DEFAULT_GRID_POINTS
from .errors import ConfigError
from .expr import MAX_ORDER
from .quadrature import DEFAULT_REFERENCE_TOLERANCE, MIN_REFERENCE_TOLERANCE
from .types import PathLikeObject

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_IDENTITY_TOLERANCE = 1e-9
DEFAULT_DOMINATION_SLACK = 1e-12
DEFAULT_N_VALUES: tuple[int, ...] = (1, 2, 3, 4)
SINGLE_THREADED_ENVIRONMENT_VARIABLE = "HH_MIDPOINT_SINGLE_THREADED"


def _single_threaded_from_environment() -> bool:
    value = os.getenv(SINGLE_THREADED_ENVIRONMENT_VARIABLE, "")
    return value.strip().lower() not in ("", "0", "false")


@dataclass
class Config:
    """Tolerances and execution settings for checking a corpus."""

    tolerance_identity: float = DEFAULT_IDENTITY_TOLERANCE
    """Allowed ``|rule + remainder - reference|``.

    Relative to ``max(1, |reference|)``.
    """

    tolerance_reference: float = DEFAULT_REFERENCE_TOLERANCE
    """Relative tolerance of the reference integral.

    Must be strictly tighter than ``tolerance_identity``.
    """

    tolerance_convexity: float = DEFAULT_CONVEXITY_TOLERANCE
    """Allowed midpoint-convexity defect, relative to the function's scale."""

    tolerance_domination: float = DEFAULT_DOMINATION_SLACK
    """Slack in ``actual_error <= bound * (1 + slack) + slack``."""

    grid_points: int = DEFAULT_GRID_POINTS
    """Number of grid nodes for convexity certificates."""

    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    """The maximum number of checks that can run at one time."""

    single_threaded: bool = field(default_factory=_single_threaded_from_environment)
    """Run one check at a time, regardless of ``jobs``.

    Can be configured with the ``HH_MIDPOINT_SINGLE_THREADED`` environment
    variable.
    """

    @property
    def effective_jobs(self) -> int:
        """The number of concurrent checks actually allowed."""
        return 1 if self.single_threaded else self.jobs

    def tolerances(self) -> dict[str, float]:
        """Returns the tolerances, keyed as in the corpus file."""
        return {
            "identity": self.tolerance_identity,
            "reference": self.tolerance_reference,
            "convexity": self.tolerance_convexity,
            "domination": self.tolerance_domination,
        }

    def validate(self) -> None:
        """Validates this configuration.

        Raises:
            ConfigError: A tolerance is not positive and finite, the reference
                tolerance is not tighter than the identity tolerance, or a
                count is out of range.
        """
        for key, value in self.tolerances().items():
            if (
                isinstance(value, bool)
                or not isinstance(value, (int, float))
                or not math.isfinite(value)
            ):
                raise ConfigError(f"tolerance '{key}' must be a finite number: {value}")
            if value <= 0:
                raise ConfigError(f"tolerance '{key}' must be positive: {value}")
        if self.tolerance_reference < MIN_REFERENCE_TOLERANCE:
            raise ConfigError(
                f"tolerance 'reference' must be at least {MIN_REFERENCE_TOLERANCE}: "
                f"{self.tolerance_reference}"
            )
        if self.tolerance_reference >= self.tolerance_identity:
            raise ConfigError(
                "tolerance 'reference' must be tighter than tolerance 'identity': "
                f"reference={self.tolerance_reference}, "
                f"identity={self.tolerance_identity}"
            )
        for name in ("grid_points", "jobs"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{name} must be an integer: {value!r}")
        if self.grid_points < 3:
            raise ConfigError(f"grid_points must be at least 3: {self.grid_points}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1: {self.jobs}")

    def copy(self) -> Config:
        """Returns a deep copy of this config.

        Returns:
            Config: A deep copy of this config.
        """
        return copy.deepcopy(self)


@dataclass
class CorpusEntry:
    """One function and interval to check, over several orders and exponents."""

    name: str
    """A label for reports."""

    expression: str
    """The integrand, in expression syntax."""

    a: float
    """Left end of the interval."""

    b: float
    """Right end of the interval."""

    n_values: list[int] = field(default_factory=lambda: list(DEFAULT_N_VALUES))
    """Rule orders to check, each in ``1..12``."""

    q_grid: list[float] = field(default_factory=lambda: list(DEFAULT_Q_GRID))
    """Exponents for the Hölder and power-mean bounds, each at least 1."""

    def validate(self, index: int | None = None) -> None:
        """Validates this entry.

        Args:
            index: The entry's position in its corpus, for error messages

        Raises:
            ConfigError: Raised with the entry and field that are invalid.
        """
        if index is None:
            where = repr(self.name)
        else:
            where = f"entry {index} ({self.name!r})"

        def fail(name: str, message: str) -> ConfigError:
            return ConfigError(f"{where}: field '{name}': {message}")

        if not isinstance(self.name, str) or not self.name:
            raise fail("name", "must be a non-empty string")
        if not isinstance(self.expression, str) or not self.expression.strip():
            raise fail("expression", "must be a non-empty string")
        for name in ("a", "b"):
            value = getattr(self, name)
            if (
                isinstance(value, bool)
                or not isinstance(value, (int, float))
                or not math.isfinite(value)
            ):
                raise fail(name, f"must be a finite number: {value!r}")
        if not self.a < self.b:
            raise fail("b", f"a < b is required: a={self.a}, b={self.b}")
        for name in ("n_values", "q_grid"):
            if not isinstance(getattr(self, name), list):
                raise fail(name, f"must be an array: {getattr(self, name)!r}")
        if not self.n_values:
            raise fail("n_values", "must not be empty")
        for n in self.n_values:
            if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_ORDER:
                raise fail(
                    "n_values", f"orders must be integers in 1..{MAX_ORDER}: {n!r}"
                )
        if not self.q_grid:
            raise fail("q_grid", "must not be empty")
        for q in self.q_grid:
            if (
                isinstance(q, bool)
                or not isinstance(q, (int, float))
                or not math.isfinite(q)
                or q < 1
            ):
                raise fail("q_grid", f"exponents must be finite and at least 1: {q!r}")


@dataclass
class Corpus:
    """A configuration together with the entries to check."""

    config: Config = field(default_factory=Config)
    entries: list[CorpusEntry] = field(default_factory=list)

    def validate(self) -> None:
        """Validates the configuration and every entry."""
        self.config.validate()
        for index, entry in enumerate(self.entries):
            entry.validate(index)


_TOLERANCE_KEYS = {
    "identity": "tolerance_identity",
    "reference": "tolerance_reference",
    "convexity": "tolerance_convexity",
    "domination": "tolerance_domination",
}
_DEFAULT_KEYS = {"n_values", "q_grid", "grid_points"}
_ENTRY_KEYS = {"name", "expression", "a", "b", "n_values", "q_grid"}


def bundled_corpus_path() -> Path:
    """Returns the path of the corpus that ships with this package."""
    return Path(str(resources.files("hh_midpoint") / "data" / "corpus.toml"))


def _table(data: dict[str, Any], key: str, where: str) -> dict[str, Any]:
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{where}: '{key}' must be a table")
    return value


def _unknown(
    table: dict[str, Any], allowed: Iterable[str], where: str
) -> None:
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown field(s): {', '.join(unknown)}")


def _array(
    table: dict[str, Any], key: str, default: list[Any], where: str
) -> list[Any]:
    value = table.get(key, default)
    if not isinstance(value, list):
        raise ConfigError(f"{where}: field '{key}': must be an array: {value!r}")
    return list(value)


def corpus_from_dict(data: dict[str, Any], source: str = "<corpus>") -> Corpus:
    """Builds a corpus from parsed TOML data.

    Args:
        data: The parsed document
        source: A name for the document, used in error messages

    Returns:
        Corpus: The validated corpus

    Raises:
        ConfigError: Raised if any table, entry or field is invalid.
    """
    _unknown(data, {"tolerances", "defaults", "entry"}, source)
    config = Config()
    tolerances = _table(data, "tolerances", source)
    _unknown(tolerances, _TOLERANCE_KEYS.keys(), f"{source}: [tolerances]")
    for key, attribute in _TOLERANCE_KEYS.items():
        if key in tolerances:
            setattr(config, attribute, tolerances[key])
    defaults = _table(data, "defaults", source)
    where_defaults = f"{source}: [defaults]"
    _unknown(defaults, _DEFAULT_KEYS, where_defaults)
    if "grid_points" in defaults:
        config.grid_points = defaults["grid_points"]
    n_values = _array(defaults, "n_values", list(DEFAULT_N_VALUES), where_defaults)
    q_grid = _array(defaults, "q_grid", list(DEFAULT_Q_GRID), where_defaults)

    raw_entries = data.get("entry", [])
    if not isinstance(raw_entries, list):
        raise ConfigError(f"{source}: 'entry' must be an array of tables ([[entry]])")
    entries = list()
    for index, raw in enumerate(raw_entries):
        where = f"{source}: entry {index}"
        if not isinstance(raw, dict):
            raise ConfigError(f"{where}: must be a table")
        _unknown(raw, _ENTRY_KEYS, where)
        for key in ("name", "expression", "a", "b"):
            if key not in raw:
                raise ConfigError(f"{where}: field '{key}': missing")
        entries.append(
            CorpusEntry(
                name=raw["name"],
                expression=raw["expression"],
                a=raw["a"],
                b=raw["b"],
                n_values=_array(raw, "n_values", n_values, where),
                q_grid=_array(raw, "q_grid", q_grid, where),
            )
        )
    corpus = Corpus(config=config, entries=entries)
    try:
        corpus.validate()
    except ConfigError as error:
        raise ConfigError(f"{source}: {error}") from error
    return corpus


def load_corpus(path: PathLikeObject | None = None) -> Corpus:
    """Reads a TOML corpus file.

    Args:
        path: The corpus file. If not provided, the bundled corpus is used.

    Returns:
        Corpus: The validated corpus

    Raises:
        ConfigError: Raised if the file can't be read, isn't valid TOML (the
            message includes the line and column), or fails validation.
    """
    path = Path(path) if path is not None else bundled_corpus_path()
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except OSError as error:
        raise ConfigError(f"{path}: cannot read corpus: {error}") from error
    except tomllib.TOMLDecodeError as error:
        raise ConfigError(f"{path}: invalid TOML: {error}") from error
    return corpus_from_dict(data, str(path))
