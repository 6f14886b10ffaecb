import numpy as np
import pytest

from dbg_persist.dynamic_graph import build_dbg
from dbg_persist.edge_strength import strength_table
from dbg_persist.formigram import formigram_of
from dbg_persist.oracle_zz import (
    MAX_CRITICALS,
    MAX_ELEMENTS,
    OracleGuardError,
    decompose,
    oracle_barcode,
    zigzag_module,
)
from dbg_persist.sampling import random_formigram
from dbg_persist.zigzag import BarInterval, zigzag_barcode

from .helpers import formigram


def _split_then_rejoin():
    return formigram(3.0, [1.0, 2.0], [("xy", "z"), ("x", "y", "z"), ("x", "yz")], [("xy", "z"), ("x", "yz")])


def test_module_structure():
    module = zigzag_module(_split_then_rejoin())
    assert module.dimensions == (2, 2, 2, 3, 2, 2, 2)
    assert module.directions == ("backward", "forward") * 3
    for matrix, direction, i in zip(module.matrices, module.directions, range(6)):
        source = module.dimensions[i + 1] if direction == "backward" else module.dimensions[i]
        target = module.dimensions[i] if direction == "backward" else module.dimensions[i + 1]
        assert matrix.shape == (target, source)
        # every block lands in exactly one block
        assert np.all(matrix.sum(axis=0) == 1)


def test_module_map_from_split_slice():
    module = zigzag_module(_split_then_rejoin())
    # c1 <- s1: {x}, {y}, {z} onto {x,y}, {z}
    assert module.bases[2] == (("x", "y"), ("z",))
    assert module.bases[3] == (("x",), ("y",), ("z",))
    assert module.matrices[2].tolist() == [[1, 1, 0], [0, 0, 1]]


def test_decompose_split_then_rejoin():
    summands = sorted(decompose(zigzag_module(_split_then_rejoin())))
    assert summands == [(0, 3), (0, 6), (3, 6)]


def test_oracle_worked_example(worked_example):
    fg = formigram_of(build_dbg(strength_table(worked_example), 0.3))
    assert oracle_barcode(fg).bars == (
        BarInterval(0.0, 2.0),
        BarInterval(1.0, 2.0, birth_closed=False),
        BarInterval(1.0, 2.0, birth_closed=False),
    )


def test_dimension_bookkeeping(rng):
    for _ in range(30):
        fg = random_formigram(rng, n_elements=6, n_criticals=4)
        module = zigzag_module(fg)
        summands = decompose(module)
        for position, dim in enumerate(module.dimensions):
            assert sum(1 for a, b in summands if a <= position <= b) == dim


def test_oracle_matches_rank_barcode(rng):
    for _ in range(100):
        fg = random_formigram(rng, n_elements=int(rng.integers(1, 8)), n_criticals=int(rng.integers(0, 6)))
        assert oracle_barcode(fg).multiset() == zigzag_barcode(fg).multiset()


def test_guard_on_elements():
    elements = "abcdefghijklm"
    assert len(elements) == MAX_ELEMENTS + 1
    fg = formigram(1.0, [], [tuple(elements)], [])
    with pytest.raises(OracleGuardError, match="oracle limited"):
        oracle_barcode(fg)


def test_guard_on_criticals():
    n = MAX_CRITICALS - 1
    times = [float(i) for i in range(1, n)]
    intervals = [("ab",) if i % 2 else ("a", "b") for i in range(n)]
    criticals = [("ab",)] * (n - 1)
    fg = formigram(float(n), times, intervals, criticals)
    assert len(fg.times) + 2 == MAX_CRITICALS
    oracle_barcode(fg)

    times.append(float(n))
    intervals.append(("ab",) if n % 2 else ("a", "b"))
    criticals.append(("ab",))
    fg = formigram(float(n + 1), times, intervals, criticals)
    with pytest.raises(OracleGuardError):
        oracle_barcode(fg)


def test_guard_is_a_value_error():
    assert issubclass(OracleGuardError, ValueError)
