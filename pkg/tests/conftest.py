from pathlib import Path

import pytest

from hh_midpoint import Corpus, load_corpus
from hh_midpoint.config import bundled_corpus_path


@pytest.fixture
def data_path() -> Path:
    return Path(__file__).parent / "data"


@pytest.fixture
def corpus_path() -> Path:
    return bundled_corpus_path()


@pytest.fixture
def corpus(corpus_path: Path) -> Corpus:
    return load_corpus(corpus_path)


@pytest.fixture
def bad_interval_path(data_path: Path) -> Path:
    return data_path / "bad-interval.toml"


@pytest.fixture
def sin_path(data_path: Path) -> Path:
    return data_path / "sin.toml"


@pytest.fixture
def empty_path(data_path: Path) -> Path:
    return data_path / "empty.toml"


@pytest.fixture
def domain_path(data_path: Path) -> Path:
    return data_path / "domain.toml"


@pytest.fixture
def bad_expression_path(data_path: Path) -> Path:
    return data_path / "bad-expression.toml"


@pytest.fixture
def invalid_toml_path(tmp_path: Path) -> Path:
    path = tmp_path / "invalid.toml"
    path.write_text('[[entry]]\nname = "exp"\nexpression = \n')
    return path
