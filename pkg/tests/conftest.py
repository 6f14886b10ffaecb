"""pytest configuration for the dbg-persist test suite.

Logging is redirected to a per-test temporary directory so the suite never
writes to ``~/.dbg_persist``. Shared DBN fixtures live in ``tests/fixtures``.
"""

from pathlib import Path

import numpy as np
import pytest

from dbg_persist import config
from dbg_persist.dbn_model import load_dbn

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(autouse=True)
def _isolated_logging(monkeypatch, tmp_path):
    """Point the rotating log file at a temp dir for every test."""
    monkeypatch.setenv("DBG_PERSIST_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.delenv("DBG_PERSIST_DIVERGENCE", raising=False)
    config.setup_logging(force=True)
    yield


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def worked_example():
    return load_dbn(FIXTURES / "worked_example.json")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)

