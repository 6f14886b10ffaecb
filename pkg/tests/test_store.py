import csv
import os

import pytest

import dbg_persist.store as store
from dbg_persist.edge_strength import strength_table


def test_write_text_creates_parents(tmp_path):
    target = tmp_path / "a" / "b" / "out.json"
    store.write_text_atomic(target, "{}\n")
    assert target.read_text(encoding="utf-8") == "{}\n"


def test_write_text_replaces_existing(tmp_path):
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    target = out_dir / "out.txt"
    target.write_text("old\n", encoding="utf-8")
    store.write_text_atomic(target, "new\n")
    assert target.read_text(encoding="utf-8") == "new\n"
    # no temp files left behind
    assert [p.name for p in out_dir.iterdir()] == ["out.txt"]


def test_strength_csv_rows(tmp_path, worked_example):
    target = tmp_path / "strengths.csv"
    store.write_strength_csv(target, strength_table(worked_example))
    with target.open("r", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert len(rows) == 2 * 7
    assert rows[0] == ["0", "X1", "X2", "0.700000000"]
    weak = [r for r in rows if r[0] == "1" and (r[1], r[2]) in {("X1", "X3"), ("X2", "X5")}]
    assert [r[3] for r in weak] == ["0.100000000", "0.100000000"]


def test_permission_error_keeps_original(tmp_path, monkeypatch):
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    target = out_dir / "out.txt"
    target.write_text("dummy\n", encoding="utf-8")

    def _raise(*_a, **_kw):
        raise PermissionError("locked")

    monkeypatch.setattr(os, "replace", _raise)
    with pytest.raises(PermissionError):
        store.write_text_atomic(target, "new\n")
    assert target.read_text(encoding="utf-8") == "dummy\n"
    assert [p.name for p in out_dir.iterdir()] == ["out.txt"]


def test_strength_csv_matches_rendered_text(tmp_path, worked_example):
    from dbg_persist.render import render_strengths_csv

    table = strength_table(worked_example)
    target = tmp_path / "strengths.csv"
    store.write_strength_csv(target, table)
    assert target.read_bytes() == render_strengths_csv(table).encode("utf-8")
