import math

import pytest

from dbg_persist.dbn_model import load_dbn
from dbg_persist.dynamic_graph import build_dbg
from dbg_persist.edge_strength import strength_table
from dbg_persist.formigram import formigram_of
from dbg_persist.metrics import (
    EXHAUSTIVE_LIMIT,
    bottleneck_distance,
    bottleneck_exhaustive,
    bottleneck_matching,
    compare_barcodes,
    interleaving_lower_bound,
    stability_check,
)
from dbg_persist.sampling import random_barcode, random_dbn
from dbg_persist.zigzag import BarInterval, Barcode, zigzag_barcode


def _code(*bars):
    return Barcode.of(BarInterval(*bar) for bar in bars)


def _fixture_barcode(path):
    return zigzag_barcode(formigram_of(build_dbg(strength_table(load_dbn(path)), 0.3)))


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ((), (), 0.0),
        (((0.0, 2.0),), (), 1.0),
        (((0.0, 2.0),), ((0.5, 2.0),), 0.5),
        (((0.0, 4.0), (1.0, 1.2)), ((0.0, 4.0),), 0.1),
        (((0.0, 1.0), (5.0, 6.0)), ((0.2, 1.0), (5.0, 6.3)), 0.3),
    ],
)
def test_small_examples(a, b, expected):
    assert bottleneck_distance(_code(*a), _code(*b)) == pytest.approx(expected)


def test_endpoint_types_do_not_matter():
    closed = _code((0.0, 2.0, True, True))
    half_open = _code((0.0, 2.0, False, False))
    assert bottleneck_distance(closed, half_open) == 0.0


def test_shifted_networks_are_one_apart(fixtures_dir):
    a = _fixture_barcode(fixtures_dir / "shift_a.json")
    b = _fixture_barcode(fixtures_dir / "shift_b.json")
    assert a.multiset() == _code((0.0, 3.0), (1.0, 3.0, False, True)).multiset()
    assert b.multiset() == _code((0.0, 3.0), (2.0, 3.0, False, True)).multiset()
    assert bottleneck_distance(a, b) == pytest.approx(1.0)


def test_pseudo_metric_properties(rng):
    for _ in range(30):
        a, b, c = (random_barcode(rng, n_bars=int(rng.integers(0, 6))) for _ in range(3))
        ab = bottleneck_distance(a, b)
        assert bottleneck_distance(a, a) == 0.0
        assert ab == pytest.approx(bottleneck_distance(b, a))
        assert ab <= bottleneck_distance(a, c) + bottleneck_distance(c, b) + 1e-9


def test_agrees_with_exhaustive_search(rng):
    for _ in range(50):
        a = random_barcode(rng, n_bars=int(rng.integers(0, 5)))
        b = random_barcode(rng, n_bars=int(rng.integers(0, 5)))
        assert bottleneck_distance(a, b) == pytest.approx(bottleneck_exhaustive(a, b))


def test_exhaustive_limit(rng):
    big = random_barcode(rng, n_bars=EXHAUSTIVE_LIMIT + 1)
    with pytest.raises(ValueError, match="limited"):
        bottleneck_exhaustive(big, Barcode())


def test_infinite_bars_rejected():
    with pytest.raises(ValueError, match="finite"):
        bottleneck_distance(_code((0.0, math.inf)), Barcode())


def test_matching_accounts_for_every_bar(rng):
    for _ in range(20):
        a, b = random_barcode(rng, n_bars=4), random_barcode(rng, n_bars=3)
        matching = bottleneck_matching(a, b)
        assert sorted([i for i, _ in matching.pairs] + list(matching.unmatched_a)) == list(range(len(a)))
        assert sorted([j for _, j in matching.pairs] + list(matching.unmatched_b)) == list(range(len(b)))


def test_interleaving_lower_bound_is_half():
    a, b = _code((0.0, 2.0)), Barcode()
    assert interleaving_lower_bound(a, b) == 0.5


def test_compare_report(fixtures_dir):
    report = compare_barcodes(
        _fixture_barcode(fixtures_dir / "shift_a.json"), _fixture_barcode(fixtures_dir / "shift_b.json")
    )
    assert report.bottleneck == pytest.approx(1.0)
    assert report.interleaving_lower_bound == pytest.approx(0.5)
    assert max(entry["cost"] for entry in report.matching) == pytest.approx(1.0)
    assert set(report.to_dict()) == {"bottleneck", "interleaving_lower_bound", "matching"}


def test_stability_worked_example(worked_example):
    dbg = build_dbg(strength_table(worked_example), 0.3)
    for eps in (0.0, 0.5, 1.0, 2.0):
        report = stability_check(dbg, eps)
        assert report.passed
        assert report.lhs <= eps + 1e-9
        assert report.to_dict()["pass"] is True
    assert stability_check(dbg, 0.0).lhs == 0.0


def test_stability_random_networks(rng):
    for _ in range(10):
        dbg = build_dbg(strength_table(random_dbn(rng, n_variables=5, n_slices=4)), float(rng.uniform()))
        for eps in (0.25, 1.0):
            assert stability_check(dbg, eps).passed


def test_stability_rejects_negative_eps(worked_example):
    with pytest.raises(ValueError):
        stability_check(build_dbg(strength_table(worked_example), 0.3), -1.0)
