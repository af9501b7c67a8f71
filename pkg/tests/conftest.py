# tests/conftest.py
import os
import sys

import pytest

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)

from config.catalog import Catalog  # noqa: E402
from nu_engine import NuEngine  # noqa: E402

CATALOG_DIR = os.path.join(REPO_ROOT, "data", "catalog")
TABLES_DIR = os.path.join(REPO_ROOT, "data", "tables")
CASES_FILE = os.path.join(REPO_ROOT, "data", "cases", "oracle_cases.txt")

ENV_VARS = ("NU_CATALOG_DIR", "NU_TABLES_DIR", "NU_MAX_DIM", "NU_MAX_PRIME_ORDER",
            "MAX_CONCURRENT", "RESULTS_DIR", "LOG_DIR")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(scope="session")
def catalog():
    return Catalog(CATALOG_DIR, TABLES_DIR)


@pytest.fixture
def engine_overrides(tmp_path):
    return {
        ("catalog", "catalog_dir"): CATALOG_DIR,
        ("catalog", "tables_dir"): TABLES_DIR,
        ("catalog", "cases_file"): CASES_FILE,
        ("output", "results_dir"): str(tmp_path / "results"),
    }


@pytest.fixture
def engine(engine_overrides):
    engine = NuEngine(overrides=engine_overrides)
    yield engine
    engine.shutdown()
