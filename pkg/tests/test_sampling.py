import numpy as np
import pytest

from dbg_persist.dbn_model import validate_dbn
from dbg_persist.formigram import check_formigram_axioms
from dbg_persist.sampling import random_barcode, random_dbn, random_formigram, random_partition


def test_random_dbn_is_valid_and_seeded():
    a = random_dbn(np.random.default_rng(7), n_variables=5, n_slices=4)
    b = random_dbn(np.random.default_rng(7), n_variables=5, n_slices=4)
    assert a == b
    assert validate_dbn(a) == []
    assert a.names == ("X1", "X2", "X3", "X4", "X5")
    assert len(a.slices) == 4


def test_random_dbn_rejects_empty():
    with pytest.raises(ValueError):
        random_dbn(np.random.default_rng(0), n_variables=0)


def test_random_partition_covers(rng):
    elements = ["a", "b", "c", "d", "e"]
    for _ in range(20):
        blocks = random_partition(rng, elements)
        members = [x for block in blocks for x in block]
        assert sorted(members) == elements


def test_random_formigram_is_valid(rng):
    for _ in range(20):
        fg = random_formigram(rng, n_elements=4, n_criticals=3, horizon=2.0)
        assert check_formigram_axioms(fg) == []
        assert fg.horizon == 2.0
        assert len(fg.times) <= 3


def test_random_barcode(rng):
    barcode = random_barcode(rng, n_bars=7, horizon=5.0)
    assert len(barcode) == 7
    assert all(0.0 <= bar.birth <= bar.death <= 5.0 for bar in barcode.bars)
