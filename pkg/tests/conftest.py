import pytest
from click.testing import CliRunner

from src.core.config import DEFAULT_CONFIG
from src.data import db


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    """No ambient config file or ledger leaks into a test; the ledger is closed after each one."""
    monkeypatch.delenv("TOPOFACTOR_CONFIG", raising=False)
    monkeypatch.delenv("TOPOFACTOR_LEDGER", raising=False)
    yield
    db.close_ledger()


@pytest.fixture
def cfg():
    return DEFAULT_CONFIG


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        # click >= 8.2 always keeps stderr apart
        return CliRunner()


@pytest.fixture
def ledger(tmp_path):
    path = tmp_path / "runs.db"
    assert db.init_ledger(str(path))
    return path
