"""Atomic output writers.

Every file the CLI produces goes through a temp file in the target directory
followed by ``os.replace``, so a reader never observes a half-written result.
The strength table CSV has **no header** and each row is:
slice, parent, child, strength (9-digit decimal or ``inf``)
"""
from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING

from .render import render_strengths_csv

if TYPE_CHECKING:
    from .edge_strength import EdgeStrengthTable

__all__ = ["write_text_atomic", "write_strength_csv"]

logger = logging.getLogger(__name__)


def _safe_temp_path(target: Path, suffix: str) -> Path:
    """Return a temp file path in the same directory as *target*.

    Keeping the temp file next to the target makes ``os.replace`` atomic.
    """
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".dbgp_tmp_", suffix=suffix)
    os.close(fd)
    return Path(tmp)


def _replace_atomically(path: Path, write) -> None:
    temp_path = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_path = _safe_temp_path(path, path.suffix or ".tmp")
        with temp_path.open("w", encoding="utf-8", newline="") as tmp_f:
            write(tmp_f)
        os.replace(temp_path, path)
        logger.info("Wrote %s", path)
    except PermissionError as exc:
        # Likely locked by another process; surface it, the CLI maps it to exit 2
        logger.warning("could not write %s due to permission error: %s", path, exc)
        raise
    finally:
        if temp_path is not None and temp_path.exists():
            try:
                temp_path.unlink()
            except OSError:
                pass


def write_text_atomic(path: Path, text: str) -> None:
    """Write *text* to *path* atomically (UTF-8)."""
    _replace_atomically(Path(path), lambda f: f.write(text))


def write_strength_csv(path: Path, table: EdgeStrengthTable) -> None:
    """Write the strength table rows to *path* as CSV, atomically."""
    write_text_atomic(path, render_strengths_csv(table))
