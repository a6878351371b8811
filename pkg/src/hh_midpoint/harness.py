"""Runs identity and bound checks over a corpus."""

from __future__ import annotations

import asyncio
import dataclasses
import logging
import math
import warnings
from asyncio import Semaphore, Task
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .bounds import (
    BoundReport,
    EndpointDerivs,
    Theorem,
    all_bounds,
    select_best,
)
from .config import Config, Corpus, CorpusEntry, load_corpus
from .convexity import certify, certify_function
from .errors import HypothesisWarning, NumericError
from .expr import Expression, evaluate, parse
from .messages import ErrorCheck, FinishCheck, StartCheck
from .quadrature import (
    Interval,
    check_identity,
    reference_integral,
    remainder_abs_integral,
)
from .report import (
    CheckReport,
    HypothesisStatus,
    ReportRow,
    TableRow,
    table_csv,
    write_text,
)
from .types import MessageQueue, PathLikeObject

logger = logging.getLogger(__name__)

REPORT_FILE_NAMES = {"csv": "report.csv", "json": "report.json"}
"""File names written by :py:func:`run_check` into its output directory."""


@dataclass(frozen=True)
class CheckResult:
    """Everything computed for one corpus entry at one rule order."""

    row: ReportRow
    table: list[TableRow]


@dataclass
class Check:
    """One corpus entry at one rule order."""

    index: int
    entry: CorpusEntry
    expression: Expression
    n: int
    config: Config

    def evaluate(self) -> CheckResult:
        """Evaluates the identity, every bound and their hypotheses.

        This is pure and synchronous, so it can run on a worker thread.
        """
        config = self.config
        iv = Interval(self.entry.a, self.entry.b)
        f, n = self.expression, self.n
        result = check_identity(f, iv, n, config.tolerance_reference)
        kernel_bound = remainder_abs_integral(f, iv, n)
        d = EndpointDerivs.from_expression(f, iv, n)

        certified: dict[float | None, bool] = {
            None: certify(
                f, iv, n, m=config.grid_points, rel_tol=config.tolerance_convexity
            ).certified
        }
        for q in self.entry.q_grid:
            certified[q] = certify(
                f, iv, n, q=q, m=config.grid_points, rel_tol=config.tolerance_convexity
            ).certified
        reports = [
            dataclasses.replace(
                report,
                hypothesis_certified=certified[report.q_used],
                actual_error=result.actual_error,
            )
            for report in all_bounds(n, iv, d, self.entry.q_grid)
        ]

        slack = config.tolerance_domination
        best = select_best(reports)
        if any(r.hypothesis_certified and not r.dominates(slack) for r in reports):
            status = HypothesisStatus.VIOLATED
        elif best.hypothesis_certified:
            status = HypothesisStatus.GUARANTEED
        else:
            status = HypothesisStatus.OBSERVED

        row = ReportRow(
            name=self.entry.name,
            n=n,
            reference=result.reference,
            rule_value=result.rule_value,
            remainder=result.remainder,
            identity_residual=result.identity_residual,
            actual_error=result.actual_error,
            bound_convex=_best_of(reports, Theorem.CONVEX),
            bound_holder_best=_best_of(reports, Theorem.HOLDER),
            bound_powermean_best=_best_of(reports, Theorem.POWER_MEAN),
            kernel_bound=kernel_bound,
            best_theorem=best.theorem.label,
            best_q=best.q_used,
            identity_passed=result.identity_residual
            <= config.tolerance_identity * max(1.0, abs(result.reference)),
            hypothesis_status=status,
        )
        return CheckResult(row=row, table=_table_rows(self.entry.name, n, reports))


def _best_of(reports: list[BoundReport], theorem: Theorem) -> float:
    values = [report.value for report in reports if report.theorem is theorem]
    return min(values) if values else math.nan


def _table_rows(name: str, n: int, reports: list[BoundReport]) -> list[TableRow]:
    convex = next(r for r in reports if r.theorem is Theorem.CONVEX)
    holder = {r.q_used: r.value for r in reports if r.theorem is Theorem.HOLDER}
    return [
        TableRow(
            name=name,
            n=n,
            q=r.q_used,
            actual_error=r.actual_error,
            eq3=convex.value,
            eq4=holder.get(r.q_used, math.nan),
            eq7=r.value,
        )
        for r in reports
        if r.theorem is Theorem.POWER_MEAN and r.q_used is not None
    ]


class WrappedError:
    check: Check
    error: Exception

    def __init__(self, check: Check, error: Exception) -> None:
        self.check = check
        self.error = error


class Checks:
    """Runs the checks of a corpus concurrently, keeping their order."""

    def __init__(self, corpus: Corpus) -> None:
        corpus.validate()
        self.config = corpus.config
        self.checks: list[Check] = list()
        self.semaphore = Semaphore(self.config.effective_jobs)
        for index, entry in enumerate(corpus.entries):
            self.add(index, entry)

    def add(self, index: int, entry: CorpusEntry) -> None:
        """Adds one check per rule order of an entry.

        Raises:
            ParseError: Raised if the entry's expression does not parse.
        """
        expression = parse(entry.expression)
        for n in entry.n_values:
            self.checks.append(
                Check(
                    index=index,
                    entry=entry,
                    expression=expression,
                    n=n,
                    config=self.config,
                )
            )

    async def run(self, messages: MessageQueue | None = None) -> list[CheckResult]:
        """Runs every check.

        Results are in the order the checks were added, regardless of which
        finishes first.

        Raises:
            NumericError: Raised after all checks have finished, if any failed.
        """
        tasks: list[Task[CheckResult | WrappedError]] = [
            asyncio.create_task(self.run_with_lock(check, messages))
            for check in self.checks
        ]
        outcomes = await asyncio.gather(*tasks)
        exceptions = [
            outcome.error for outcome in outcomes if isinstance(outcome, WrappedError)
        ]
        if exceptions:
            raise NumericError(exceptions)
        return [outcome for outcome in outcomes if isinstance(outcome, CheckResult)]

    async def run_with_lock(
        self, check: Check, messages: MessageQueue | None
    ) -> CheckResult | WrappedError:
        async with self.semaphore:
            if messages:
                await messages.put(StartCheck(name=check.entry.name, n=check.n))
            try:
                if self.config.single_threaded:
                    result = check.evaluate()
                else:
                    result = await asyncio.to_thread(check.evaluate)
            except Exception as error:
                logger.debug("%s n=%d failed: %s", check.entry.name, check.n, error)
                if messages:
                    await messages.put(
                        ErrorCheck(name=check.entry.name, n=check.n, error=error)
                    )
                return WrappedError(check, error)
            logger.debug(
                "%s n=%d: %s",
                check.entry.name,
                check.n,
                result.row.hypothesis_status.value,
            )
            if messages:
                await messages.put(
                    FinishCheck(
                        name=check.entry.name,
                        n=check.n,
                        status=result.row.hypothesis_status.value,
                    )
                )
            return result


async def check_corpus(
    corpus: Corpus, messages: MessageQueue | None = None
) -> CheckReport:
    """Checks the identity and bounds for every entry and order of a corpus.

    A row whose best bound has no certified hypothesis is reported as
    ``observed`` and emits a :py:class:`HypothesisWarning`.

    Args:
        corpus: The corpus
        messages: An optional queue to use for progress reporting

    Returns:
        CheckReport: One row per (entry, order), in corpus order

    Raises:
        ParseError: Raised if an expression does not parse.
        ConfigError: Raised if the corpus is not valid.
        NumericError: Raised if any check failed numerically.
    """
    results = await Checks(corpus).run(messages)
    report = CheckReport(tolerances=corpus.config.tolerances())
    for result in results:
        row = result.row
        if row.hypothesis_status is HypothesisStatus.OBSERVED:
            warnings.warn(
                f"{row.name} n={row.n}: no convexity hypothesis certified for the "
                f"{row.best_theorem} bound, its domination is only observed",
                HypothesisWarning,
            )
        report.rows.append(row)
    return report


async def tabulate_corpus(
    corpus: Corpus, messages: MessageQueue | None = None
) -> list[TableRow]:
    """Evaluates all three bounds for every entry, order and exponent.

    Returns:
        list[TableRow]: Rows in (entry, order, exponent) order
    """
    results = await Checks(corpus).run(messages)
    return [row for result in results for row in result.table]


def _load(
    config_path: PathLikeObject | None,
    tolerance_identity: float | None,
    jobs: int | None,
) -> Corpus:
    corpus = load_corpus(config_path)
    if tolerance_identity is not None:
        corpus.config.tolerance_identity = tolerance_identity
    if jobs is not None:
        corpus.config.jobs = jobs
    corpus.validate()
    return corpus


async def run_check(
    config_path: PathLikeObject | None = None,
    out: PathLikeObject | None = None,
    tolerance_identity: float | None = None,
    jobs: int | None = None,
    messages: MessageQueue | None = None,
) -> CheckReport:
    """Loads a corpus file, checks it, and writes its reports.

    Args:
        config_path: The corpus file. If not provided, the bundled corpus is
            used.
        out: If provided, a directory to write ``report.csv`` and
            ``report.json`` into
        tolerance_identity: Overrides the file's identity tolerance
        jobs: Overrides the number of concurrent checks
        messages: An optional queue to use for progress reporting

    Returns:
        CheckReport: The report. Its ``exit_code`` is 0 iff every identity
        holds and no certified bound is violated.
    """
    corpus = _load(config_path, tolerance_identity, jobs)
    report = await check_corpus(corpus, messages)
    if out is not None:
        for format, file_name in REPORT_FILE_NAMES.items():
            path = await write_text(Path(out) / file_name, report.render(format))
            logger.info("wrote %s", path)
    return report


async def run_table(
    config_path: PathLikeObject | None,
    out_path: PathLikeObject,
    jobs: int | None = None,
    messages: MessageQueue | None = None,
) -> list[TableRow]:
    """Loads a corpus file and writes its bound comparison table as CSV.

    Returns:
        list[TableRow]: The rows that were written
    """
    corpus = _load(config_path, None, jobs)
    rows = await tabulate_corpus(corpus, messages)
    path = await write_text(out_path, table_csv(rows))
    logger.info("wrote %s", path)
    return rows


class SanityOutcome(str, Enum):
    """The outcome of :py:func:`run_hh_sanity`."""

    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not applicable"


@dataclass(frozen=True)
class SanityResult:
    """The two-sided mean value inequality for one entry."""

    name: str
    outcome: SanityOutcome
    midpoint_value: float
    """``f((a+b)/2)``."""

    mean_value: float
    """``∫f / (b-a)``."""

    endpoint_mean: float
    """``(f(a) + f(b)) / 2``."""

    @property
    def passed(self) -> bool:
        """False only for a convex function that fails the inequality."""
        return self.outcome is not SanityOutcome.FAIL


def run_hh_sanity(entry: CorpusEntry, config: Config | None = None) -> SanityResult:
    """Checks ``f((a+b)/2) <= ∫f/(b-a) <= (f(a)+f(b))/2`` for a convex ``f``.

    Functions that are not certified convex on a grid are not applicable.

    Args:
        entry: The corpus entry
        config: Tolerances and grid size. Defaults to :py:class:`Config`.

    Returns:
        SanityResult: The outcome and the three means

    Raises:
        ParseError: Raised if the expression does not parse.
        DomainError: Raised if ``f`` cannot be evaluated on the interval.
        ConvergenceError: Raised if the reference integral does not converge.
    """
    config = config or Config()
    f = parse(entry.expression)
    iv = Interval(entry.a, entry.b)
    midpoint, left, right = (float(v) for v in evaluate(f, [iv.midpoint, iv.a, iv.b]))
    mean = reference_integral(f, iv, config.tolerance_reference) / iv.length
    endpoints = (left + right) / 2
    certificate = certify_function(
        f, iv, m=config.grid_points, rel_tol=config.tolerance_convexity
    )
    if not certificate.certified:
        outcome = SanityOutcome.NOT_APPLICABLE
    else:
        slack = config.tolerance_domination * (1.0 + abs(mean))
        if midpoint <= mean + slack and mean <= endpoints + slack:
            outcome = SanityOutcome.PASS
        else:
            outcome = SanityOutcome.FAIL
    logger.debug(
        "%s: %r <= %r <= %r: %s", entry.name, midpoint, mean, endpoints, outcome.value
    )
    return SanityResult(
        name=entry.name,
        outcome=outcome,
        midpoint_value=midpoint,
        mean_value=mean,
        endpoint_mean=endpoints,
    )
