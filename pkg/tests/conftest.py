from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
FIXTURES = REPO_ROOT / "fixtures"

sys.path.insert(0, str(TESTS_DIR))  # make the oracle modules importable

from chainsem.ingest import read_fixture  # noqa: E402
from chainsem.pipeline import map_corpus  # noqa: E402


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.jsonl"


@pytest.fixture(scope="session")
def creation_corpus():
    return read_fixture(fixture_path("creation"))


@pytest.fixture(scope="session")
def lifecycle_corpus():
    return read_fixture(fixture_path("lifecycle"))


@pytest.fixture(scope="session")
def delegation_corpus():
    return read_fixture(fixture_path("delegation"))


@pytest.fixture(scope="session")
def standards_corpus():
    return read_fixture(fixture_path("standards"))


@pytest.fixture(scope="session")
def lifecycle_mapped(lifecycle_corpus):
    return map_corpus(lifecycle_corpus)


@pytest.fixture(scope="session")
def delegation_mapped(delegation_corpus):
    return map_corpus(delegation_corpus)


@pytest.fixture(scope="session")
def creation_mapped(creation_corpus):
    return map_corpus(creation_corpus)


@pytest.fixture(scope="session")
def standards_mapped(standards_corpus):
    return map_corpus(standards_corpus)
