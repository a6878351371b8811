import csv
import json
from pathlib import Path

import pytest
from click.testing import CliRunner, Result

import hh_midpoint._cli


def invoke(*args: str) -> Result:
    runner = CliRunner(mix_stderr=False)
    return runner.invoke(hh_midpoint._cli.cli, list(args))


def test_check(tmp_path: Path, corpus_path: Path) -> None:
    result = invoke("check", str(corpus_path), "--out", str(tmp_path))
    assert result.exit_code == 0, result.stderr
    assert result.stdout.startswith("# identity=")
    assert result.stdout == (tmp_path / "report.csv").read_text()
    assert "guaranteed" in result.stderr


def test_check_bundled_corpus_quiet(tmp_path: Path) -> None:
    result = invoke("check", "-q", "--out", str(tmp_path))
    assert result.exit_code == 0, result.stderr
    assert result.stdout == ""
    rows = list(
        csv.DictReader(
            line
            for line in (tmp_path / "report.csv").read_text().splitlines()
            if not line.startswith("#")
        )
    )
    assert len(rows) == 24


def test_check_json(corpus_path: Path) -> None:
    result = invoke("check", str(corpus_path), "--format", "json")
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert len(data["rows"]) == 24


def test_check_verbose_shows_library_logs(tmp_path: Path, corpus_path: Path) -> None:
    result = invoke("-v", "DEBUG", "check", "-q", str(corpus_path), "-o", str(tmp_path))
    assert result.exit_code == 0, result.stderr
    assert f"wrote {tmp_path / 'report.csv'}" in result.stderr
    assert "reference integral of" in result.stderr


def test_check_bad_interval(bad_interval_path: Path) -> None:
    result = invoke("check", str(bad_interval_path))
    assert result.exit_code == 2
    assert "ERROR:" in result.stderr
    assert "field 'b'" in result.stderr


@pytest.mark.parametrize(
    "file_name,field",
    [("scalar-orders.toml", "n_values"), ("fractional-grid.toml", "grid_points")],
)
def test_check_bad_field_type(data_path: Path, file_name: str, field: str) -> None:
    result = invoke("check", str(data_path / file_name))
    assert result.exit_code == 2
    assert "ERROR:" in result.stderr
    assert field in result.stderr


def test_check_bad_expression(bad_expression_path: Path) -> None:
    result = invoke("check", str(bad_expression_path))
    assert result.exit_code == 2
    assert "byte offset 5" in result.stderr


def test_check_observed(sin_path: Path) -> None:
    result = invoke("check", str(sin_path))
    assert result.exit_code == 0, result.stderr
    assert "observed" in result.stdout
    assert "only observed" in result.stderr


def test_check_numeric_error(domain_path: Path) -> None:
    result = invoke("check", "-q", str(domain_path))
    assert result.exit_code == 3
    assert "DomainError" in result.stderr


def test_check_tolerance_identity_too_tight(corpus_path: Path) -> None:
    result = invoke("check", str(corpus_path), "--tolerance-identity", "1e-13")
    assert result.exit_code == 2
    assert "tighter" in result.stderr


def test_check_jobs_are_deterministic(tmp_path: Path, corpus_path: Path) -> None:
    one = invoke("check", str(corpus_path), "-q", "-j", "1", "-o", str(tmp_path / "1"))
    eight = invoke(
        "check", str(corpus_path), "-q", "-j", "8", "-o", str(tmp_path / "8")
    )
    assert one.exit_code == eight.exit_code == 0
    for name in ("report.csv", "report.json"):
        assert (tmp_path / "1" / name).read_bytes() == (
            tmp_path / "8" / name
        ).read_bytes()


def test_table(tmp_path: Path, corpus_path: Path) -> None:
    out = tmp_path / "table.csv"
    result = invoke("table", str(corpus_path), "--out", str(out))
    assert result.exit_code == 0, result.stderr
    assert "120 rows" in result.stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "name,n,q,actual_error,eq3,eq4,eq7"
    assert len(lines) == 121


def test_table_requires_out(corpus_path: Path) -> None:
    result = invoke("table", str(corpus_path))
    assert result.exit_code == 2


def test_kernel(tmp_path: Path) -> None:
    out = tmp_path / "kernel.csv"
    result = invoke("kernel", "--n", "2", "--out", str(out))
    assert result.exit_code == 0, result.stderr
    lines = out.read_text().splitlines()
    assert len(lines) == 1002
    assert lines[0] == "t,value"
    assert lines[501] == "0.5,0.125"


def test_kernel_high_order(tmp_path: Path) -> None:
    out = tmp_path / "kernel.csv"
    result = invoke("kernel", "--n", "200", "--out", str(out))
    assert result.exit_code == 0, result.stderr
    lines = out.read_text().splitlines()
    assert len(lines) == 1002
    assert all(line.endswith(",0") for line in lines[1:])


def test_kernel_invalid_order(tmp_path: Path) -> None:
    out = tmp_path / "kernel.csv"
    result = invoke("kernel", "--n", "0", "--out", str(out))
    assert result.exit_code == 2
    assert "ERROR:" in result.stderr
    assert not out.exists()


def test_sanity(corpus_path: Path) -> None:
    result = invoke("sanity", str(corpus_path))
    assert result.exit_code == 0, result.stderr
    assert result.stdout.count("pass") == 5
    assert result.stdout.count("not applicable") == 1


def test_sanity_not_applicable(sin_path: Path) -> None:
    result = invoke("sanity", str(sin_path))
    assert result.exit_code == 0, result.stderr
    assert "not applicable" in result.stdout


def test_sanity_domain_error(domain_path: Path) -> None:
    result = invoke("sanity", str(domain_path))
    assert result.exit_code == 3
