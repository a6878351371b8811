"""Blocking interfaces for the harness.

These should only be used from fully synchronous code. If you have _any_ async
code in your application, prefer the functions in :py:mod:`hh_midpoint.harness`.
"""

import asyncio

from . import harness
from .config import Corpus
from .report import CheckReport, TableRow
from .types import MessageQueue, PathLikeObject


def check_corpus(corpus: Corpus, messages: MessageQueue | None = None) -> CheckReport:
    """Checks every entry and order of a corpus, synchronously.

    Args:
        corpus: The corpus
        messages: An optional queue to use for progress reporting

    Returns:
        CheckReport: One row per (entry, order), in corpus order
    """
    return asyncio.run(harness.check_corpus(corpus, messages=messages))


def tabulate_corpus(
    corpus: Corpus, messages: MessageQueue | None = None
) -> list[TableRow]:
    """Evaluates all three bounds for every entry, order and exponent, synchronously.

    Args:
        corpus: The corpus
        messages: An optional queue to use for progress reporting

    Returns:
        list[TableRow]: Rows in (entry, order, exponent) order
    """
    return asyncio.run(harness.tabulate_corpus(corpus, messages=messages))


def run_check(
    config_path: PathLikeObject | None = None,
    out: PathLikeObject | None = None,
    tolerance_identity: float | None = None,
    jobs: int | None = None,
) -> CheckReport:
    """Loads a corpus file, checks it, and writes its reports, synchronously.

    Args:
        config_path: The corpus file. If not provided, the bundled corpus is
            used.
        out: If provided, a directory to write ``report.csv`` and
            ``report.json`` into
        tolerance_identity: Overrides the file's identity tolerance
        jobs: Overrides the number of concurrent checks

    Returns:
        CheckReport: The report
    """
    return asyncio.run(
        harness.run_check(
            config_path=config_path,
            out=out,
            tolerance_identity=tolerance_identity,
            jobs=jobs,
        )
    )


def run_table(
    config_path: PathLikeObject | None,
    out_path: PathLikeObject,
    jobs: int | None = None,
) -> list[TableRow]:
    """Loads a corpus file and writes its bound comparison table, synchronously.

    Args:
        config_path: The corpus file. If None, the bundled corpus is used.
        out_path: The CSV file to write
        jobs: Overrides the number of concurrent checks

    Returns:
        list[TableRow]: The rows that were written
    """
    return asyncio.run(harness.run_table(config_path, out_path, jobs=jobs))
