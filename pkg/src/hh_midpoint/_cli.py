from __future__ import annotations

import asyncio
import logging
import sys
import warnings
from asyncio import Queue
from collections.abc import Awaitable, Callable, Iterator
from contextlib import contextmanager
from typing import NoReturn, TypeVar

import click
import click_logging
import tabulate
import tqdm
from click import Choice

from . import harness
from .config import load_corpus
from .errors import (
    ConfigError,
    DomainError,
    HypothesisWarning,
    NumericError,
    OrderError,
    ParseError,
)
from .kernel import RuleOrder
from .messages import ErrorCheck, FinishCheck, StartCheck
from .report import CheckReport, format_number, kernel_csv, write_text
from .types import MessageQueue

logger = logging.getLogger("hh_midpoint")
click_logging.basic_config(logger)

T = TypeVar("T")

EXIT_CHECK_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERIC_ERROR = 3


@click.group()
@click_logging.simple_verbosity_option(logger)  # type: ignore
def cli() -> None:
    """Check the corrected midpoint rule and its error bounds.

    See each subcommand's help text for more information:

        $ hh-midpoint check --help
        $ hh-midpoint table --help
    """


@cli.command()
@click.argument("config", required=False, type=click.Path(dir_okay=False))
@click.option(
    "-o",
    "--out",
    help="Directory to write report.csv and report.json into",
    type=click.Path(file_okay=False),
)
@click.option(
    "-f",
    "--format",
    "format_",
    help="The format of the report printed to standard output",
    default="csv",
    type=Choice(["csv", "json"]),
    show_default=True,
)
@click.option(
    "--tolerance-identity",
    help="Override the identity tolerance of the corpus file",
    type=float,
)
@click.option(
    "-j", "--jobs", help="The maximum number of concurrent checks", type=int
)
@click.option(
    "-q",
    "--quiet",
    help="Do not print anything to standard output.",
    default=False,
    is_flag=True,
    show_default=True,
)
def check(
    config: str | None,
    out: str | None,
    format_: str,
    tolerance_identity: float | None,
    jobs: int | None,
    quiet: bool,
) -> None:
    """Check the identity and bounds for every entry of a corpus.

    If CONFIG is not provided, the bundled corpus is used. The report goes to
    standard output, and a summary to standard error:

        $ hh-midpoint check corpus.toml --out reports

    Exits 1 if an identity residual is over tolerance or a certified bound is
    violated, 2 on a configuration error, and 3 on a numeric failure.
    """
    report = _run(
        lambda messages: harness.run_check(
            config_path=config,
            out=out,
            tolerance_identity=tolerance_identity,
            jobs=jobs,
            messages=messages,
        ),
        quiet,
    )
    if not quiet:
        print(report.render(format_), end="")
        print_summary(report)
    for row in report.failures():
        print(
            f"ERROR: {row.name} n={row.n}: identity_passed="
            f"{str(row.identity_passed).lower()}, status={row.hypothesis_status.value}",
            file=sys.stderr,
        )
    sys.exit(report.exit_code)


@cli.command()
@click.argument("config", required=False, type=click.Path(dir_okay=False))
@click.option(
    "-o",
    "--out",
    help="The CSV file to write",
    required=True,
    type=click.Path(dir_okay=False),
)
@click.option(
    "-j", "--jobs", help="The maximum number of concurrent checks", type=int
)
@click.option(
    "-q",
    "--quiet",
    help="Do not print anything to standard output.",
    default=False,
    is_flag=True,
    show_default=True,
)
def table(config: str | None, out: str, jobs: int | None, quiet: bool) -> None:
    """Write all three bounds for every entry, order and exponent as CSV.

    The columns are ``name,n,q,actual_error,eq3,eq4,eq7``, for plotting
    elsewhere:

        $ hh-midpoint table corpus.toml --out bounds.csv
    """
    rows = _run(
        lambda messages: harness.run_table(config, out, jobs=jobs, messages=messages),
        quiet,
    )
    if not quiet:
        print(f"{len(rows)} rows written to {out}")


@cli.command()
@click.option("-n", "--n", "n", help="The rule order", required=True, type=int)
@click.option(
    "-o",
    "--out",
    help="The CSV file to write",
    required=True,
    type=click.Path(dir_okay=False),
)
def kernel(n: int, out: str) -> None:
    """Write the kernel M_n sampled on [0, 1] with step 0.001 as CSV.

        $ hh-midpoint kernel --n 3 --out kernel.csv
    """
    try:
        RuleOrder(n)
    except OrderError as error:
        _fail(error, EXIT_CONFIG_ERROR)
    asyncio.run(write_text(out, kernel_csv(n)))


@cli.command()
@click.argument("config", required=False, type=click.Path(dir_okay=False))
def sanity(config: str | None) -> None:
    """Check the mean value of each convex corpus function lies between its
    midpoint value and the mean of its endpoint values.

    Functions that are not convex on their interval are not applicable. Exits
    1 if any convex function fails.
    """
    try:
        corpus = load_corpus(config)
        results = [
            harness.run_hh_sanity(entry, corpus.config) for entry in corpus.entries
        ]
    except (ConfigError, ParseError) as error:
        _fail(error, EXIT_CONFIG_ERROR)
    except (DomainError, ArithmeticError) as error:
        _fail(error, EXIT_NUMERIC_ERROR)
    print(
        tabulate.tabulate(
            [
                [
                    result.name,
                    format_number(result.midpoint_value),
                    format_number(result.mean_value),
                    format_number(result.endpoint_mean),
                    result.outcome.value,
                ]
                for result in results
            ],
            headers=["Name", "f(midpoint)", "Mean", "Endpoint mean", "Outcome"],
            disable_numparse=True,
        )
    )
    if not all(result.passed for result in results):
        sys.exit(EXIT_CHECK_FAILURE)


def _fail(error: Exception, code: int) -> NoReturn:
    print(f"ERROR: {error}", file=sys.stderr)
    sys.exit(code)


def _run(function: Callable[[MessageQueue | None], Awaitable[T]], quiet: bool) -> T:
    try:
        with _log_hypothesis_warnings():
            return asyncio.run(_with_progress(function, quiet))
    except (ConfigError, ParseError) as error:
        _fail(error, EXIT_CONFIG_ERROR)
    except NumericError as error:
        for exception in error.exceptions:
            print(f"ERROR: {type(exception).__name__}: {exception}", file=sys.stderr)
        sys.exit(EXIT_NUMERIC_ERROR)


async def _with_progress(
    function: Callable[[MessageQueue | None], Awaitable[T]], quiet: bool
) -> T:
    messages: MessageQueue | None = None if quiet else Queue()
    task = asyncio.create_task(report_progress(messages))
    try:
        return await function(messages)
    finally:
        if messages:
            await messages.put(None)  # type: ignore[arg-type]
        await task


@contextmanager
def _log_hypothesis_warnings() -> Iterator[None]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", HypothesisWarning)
        yield
    for warning in caught:
        if issubclass(warning.category, HypothesisWarning):
            logger.warning(str(warning.message))
        else:
            warnings.warn_explicit(
                warning.message, warning.category, warning.filename, warning.lineno
            )


async def report_progress(messages: MessageQueue | None) -> None:
    if messages is None:
        return
    progress_bar = tqdm.tqdm(unit="check", file=sys.stderr)
    started = 0
    done = 0
    errors = 0
    progress_bar.set_postfix_str(f"{errors} errors")
    while True:
        message = await messages.get()
        if isinstance(message, StartCheck):
            started += 1
            progress_bar.set_description_str(f"{message.name} n={message.n}")
        elif isinstance(message, FinishCheck):
            done += 1
            progress_bar.update(1)
        elif isinstance(message, ErrorCheck):
            done += 1
            errors += 1
            progress_bar.update(1)
            progress_bar.set_postfix_str(f"{errors} errors")
            progress_bar.write(
                f"ERROR: {message.name} n={message.n} - "
                f"{type(message.error).__name__}: {message.error}",
                file=sys.stderr,
            )
        elif message is None:
            progress_bar.close()
            return


def print_summary(report: CheckReport) -> None:
    """Prints one line per row to standard error."""
    print(
        tabulate.tabulate(
            [
                [
                    row.name,
                    row.n,
                    format(row.identity_residual, ".3g"),
                    format(row.actual_error, ".6g"),
                    format(row.best_bound, ".6g"),
                    row.best_theorem
                    + ("" if row.best_q is None else f" (q={row.best_q:g})"),
                    row.hypothesis_status.value,
                ]
                for row in report.rows
            ],
            headers=["Name", "n", "Residual", "Error", "Bound", "Best", "Status"],
            disable_numparse=True,
        ),
        file=sys.stderr,
    )
