from pathlib import Path

import pytest

import hh_midpoint.blocking
from hh_midpoint import (
    Corpus,
    HypothesisStatus,
    HypothesisWarning,
    NumericError,
    load_corpus,
)


def test_check_corpus(corpus: Corpus) -> None:
    report = hh_midpoint.blocking.check_corpus(corpus)
    assert len(report.rows) == 24
    assert report.exit_code == 0


def test_check_corpus_numeric_error(domain_path: Path) -> None:
    with pytest.raises(NumericError):
        hh_midpoint.blocking.check_corpus(load_corpus(domain_path))


def test_tabulate_corpus(corpus: Corpus) -> None:
    assert len(hh_midpoint.blocking.tabulate_corpus(corpus)) == 120


def test_run_check(tmp_path: Path, sin_path: Path) -> None:
    with pytest.warns(HypothesisWarning):
        report = hh_midpoint.blocking.run_check(sin_path, tmp_path)
    assert report.rows[0].hypothesis_status is HypothesisStatus.OBSERVED
    assert (tmp_path / "report.csv").exists()
    assert (tmp_path / "report.json").exists()


def test_run_table(tmp_path: Path, data_path: Path) -> None:
    rows = hh_midpoint.blocking.run_table(
        data_path / "defaults.toml", tmp_path / "table.csv", jobs=2
    )
    assert len(rows) == 6
    assert (tmp_path / "table.csv").exists()
