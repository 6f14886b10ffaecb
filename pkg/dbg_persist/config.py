"""Application configuration and logging helpers.

Configuration values are sourced from environment variables (a local ``.env``
is loaded first) with fallbacks so that the CLI works out-of-the-box but can
be customised.

Configuration:
    - DBG_PERSIST_LOG: Logging level (default: WARNING)
    - DBG_PERSIST_LOG_DIR: Directory for log files (default: ~/.dbg_persist)
    - DBG_PERSIST_DIVERGENCE: Default divergence for CLI commands (default: tv)

Logging is set up once via :func:`setup_logging`, writing to a rotating file
``dbgp.log`` in the log directory. Nothing is logged to stdout.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Final

from dotenv import load_dotenv

__all__ = ["Config", "load_config", "setup_logging", "get_logger", "enable_stderr_logging"]

_DEFAULT_LEVEL: Final = "WARNING"
_DEFAULT_DIVERGENCE: Final = "tv"
_LOG_FILE_NAME: Final = "dbgp.log"
_MAX_BYTES: Final = 512_000  # 0.5 MB per file
_BACKUP_COUNT: Final = 3
_FORMAT: Final = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


@dataclass(slots=True, frozen=True)
class Config:  # noqa: D401
    """Runtime configuration (immutable)."""

    log_dir: Path
    log_level: str
    divergence: str


def _resolve_log_dir() -> Path:
    """Determine the log directory based on environment or default."""
    log_dir = os.getenv("DBG_PERSIST_LOG_DIR")
    if log_dir:
        return Path(log_dir).expanduser()
    return Path("~/.dbg_persist").expanduser()


def load_config() -> Config:
    """Load configuration from environment with defaults."""
    load_dotenv()
    log_level = os.getenv("DBG_PERSIST_LOG", _DEFAULT_LEVEL).upper()
    divergence = os.getenv("DBG_PERSIST_DIVERGENCE", _DEFAULT_DIVERGENCE).lower()
    return Config(log_dir=_resolve_log_dir(), log_level=log_level, divergence=divergence)


_LOGGING_CONFIGURED = False
_FILE_HANDLER: logging.Handler | None = None


def setup_logging(cfg: Config | None = None, *, force: bool = False) -> None:
    """Initialise rotating-file logging once (idempotent).

    Args:
        cfg: Optional configuration object. If not provided, one will be loaded.
        force: Replace a previously installed handler (used when the log
            directory changes within one process, e.g. in tests).
    """
    global _LOGGING_CONFIGURED, _FILE_HANDLER  # noqa: PLW0603
    if _LOGGING_CONFIGURED and not force:
        return

    cfg = cfg or load_config()
    root_logger = logging.getLogger()
    if _FILE_HANDLER is not None:
        root_logger.removeHandler(_FILE_HANDLER)
        _FILE_HANDLER.close()

    cfg.log_dir.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(
        cfg.log_dir / _LOG_FILE_NAME,
        maxBytes=_MAX_BYTES,
        backupCount=_BACKUP_COUNT,
        encoding="utf-8",
    )
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))

    root_logger.setLevel(cfg.log_level)
    root_logger.addHandler(handler)

    _FILE_HANDLER = handler
    _LOGGING_CONFIGURED = True


def enable_stderr_logging() -> None:
    """Mirror log records to stderr at DEBUG level (``--verbose``)."""
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(_FORMAT))
    root_logger = logging.getLogger()
    root_logger.addHandler(handler)
    root_logger.setLevel(logging.DEBUG)


def get_logger(name: str | None = None) -> logging.Logger:  # noqa: D401
    """Return a logger, ensuring logging is configured.

    Args:
        name: Logger name (typically __name__ from the calling module)
    """
    if not _LOGGING_CONFIGURED:
        setup_logging()
    return logging.getLogger(name)
