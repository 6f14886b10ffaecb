import logging

import pytest

pytestmark = pytest.mark.new

import dbg_persist.config as cfg


def test_load_defaults(monkeypatch, tmp_path):
    monkeypatch.delenv("DBG_PERSIST_LOG_DIR", raising=False)
    monkeypatch.delenv("DBG_PERSIST_LOG", raising=False)
    monkeypatch.setenv("HOME", str(tmp_path))
    c = cfg.load_config()
    assert c.log_dir == tmp_path / ".dbg_persist"
    assert c.log_level == "WARNING"
    assert c.divergence == "tv"


def test_env_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("DBG_PERSIST_LOG", "debug")
    monkeypatch.setenv("DBG_PERSIST_DIVERGENCE", "Hellinger")
    c = cfg.load_config()
    assert c.log_level == "DEBUG"
    assert c.divergence == "hellinger"
    assert c.log_dir == tmp_path / "logs"


def test_logging_creates_file(tmp_path, monkeypatch):
    monkeypatch.setenv("DBG_PERSIST_LOG", "INFO")
    c = cfg.load_config()
    cfg.setup_logging(c, force=True)
    log_file = c.log_dir / "dbgp.log"
    assert log_file.exists()
    logger = cfg.get_logger("test")
    logger.info("hello")
    for handler in logging.getLogger().handlers:
        handler.flush()
    content = log_file.read_text(encoding="utf-8")
    assert "| INFO | test | hello" in content


def test_setup_is_idempotent(tmp_path):
    root = logging.getLogger()
    before = len(root.handlers)
    cfg.setup_logging()
    cfg.setup_logging()
    assert len(root.handlers) == before


def test_force_replaces_handler(tmp_path, monkeypatch):
    root = logging.getLogger()
    before = len(root.handlers)
    monkeypatch.setenv("DBG_PERSIST_LOG_DIR", str(tmp_path / "other"))
    cfg.setup_logging(force=True)
    assert len(root.handlers) == before
    assert (tmp_path / "other" / "dbgp.log").exists()
