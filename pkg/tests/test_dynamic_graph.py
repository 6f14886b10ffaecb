import math

import networkx as nx
import pytest

from dbg_persist.dynamic_graph import (
    DynamicBayesianGraph,
    build_dbg,
    check_dg_axioms,
    serialize_dbg,
    smooth_dbg,
    snapshot,
)
from dbg_persist.edge_strength import strength_table
from dbg_persist.sampling import random_dbn
from dbg_persist.timeline import Timeline


def _edges(graph):
    return {tuple(sorted(e)) for e in graph.edges}


def test_worked_example_graph(worked_example):
    dbg = build_dbg(strength_table(worked_example), 0.3)
    assert dbg.horizon == 2.0
    assert dbg.critical_times == (1.0,)
    assert nx.is_connected(snapshot(dbg, 0.5))
    assert nx.number_connected_components(snapshot(dbg, 1.5)) == 3
    assert snapshot(dbg, 1.0).number_of_edges() == 7


def test_eta_extremes(worked_example):
    table = strength_table(worked_example)
    empty = build_dbg(table, 1.0)
    assert all(not edges for edges in empty.slice_edges)
    assert empty.critical_times == ()
    full = build_dbg(table, -0.1)
    assert all(len(edges) == 7 for edges in full.slice_edges)
    assert build_dbg(table, math.inf).slice_edges == empty.slice_edges


def test_tie_at_eta_excludes_edge(worked_example):
    table = strength_table(worked_example)
    eta = table.value(0, ("X1", "X2"))
    dbg = build_dbg(table, eta)
    assert ("X1", "X2") not in dbg.slice_edges[0]


def test_snapshot_boundaries(worked_example):
    dbg = build_dbg(strength_table(worked_example), 0.3)
    assert _edges(snapshot(dbg, 0.0)) == set(dbg.slice_edges[0])
    assert _edges(snapshot(dbg, 2.0)) == set(dbg.slice_edges[1])
    assert set(snapshot(dbg, 1.5).nodes) == set(worked_example.names)
    with pytest.raises(ValueError):
        snapshot(dbg, -1.0)


def test_critical_union(worked_example):
    dbg = build_dbg(strength_table(worked_example), 0.3)
    left, right = dbg.slice_edges
    assert dbg.critical_edges[1.0] == left | right


def test_smoothing(worked_example):
    dbg = build_dbg(strength_table(worked_example), 0.3)
    assert smooth_dbg(dbg, 0) == dbg
    wide = smooth_dbg(dbg, 5.0)
    assert wide.critical_times == ()
    assert _edges(snapshot(wide, 1.9)) == set(dbg.slice_edges[0] | dbg.slice_edges[1])
    with pytest.raises(ValueError):
        smooth_dbg(dbg, -1)


def test_axioms_hold_for_random_graphs(rng):
    for _ in range(25):
        dbn = random_dbn(rng, n_variables=5, n_slices=5)
        dbg = build_dbg(strength_table(dbn), float(rng.uniform()))
        assert check_dg_axioms(dbg) == []
        assert check_dg_axioms(smooth_dbg(dbg, 0.75)) == []
        assert len(dbg.critical_times) <= dbn.last_slice


def test_intersection_convention_detected():
    ab, bc = frozenset({("A", "B")}), frozenset({("B", "C")})
    mutant = DynamicBayesianGraph(
        vertices=("A", "B", "C"),
        delta_t=1.0,
        eta=0.0,
        edges=Timeline(horizon=2.0, breakpoints=(1.0,), interval_values=(ab, bc), breakpoint_values=(ab & bc,)),
    )
    violations = check_dg_axioms(mutant)
    assert any("comparability violated at t=1" in v and "A-B" in v for v in violations)
    assert any("B-C" in v for v in violations)


def test_missing_self_loop_detected():
    stray = frozenset({("A", "Z")})
    graph = DynamicBayesianGraph(
        vertices=("A", "B"),
        delta_t=1.0,
        eta=0.0,
        edges=Timeline.constant(1.0, stray),
    )
    violations = check_dg_axioms(graph)
    assert any("missing self-loop: vertex Z" in v for v in violations)


def test_threshold_monotonicity(rng):
    for _ in range(10):
        table = strength_table(random_dbn(rng, n_variables=5, n_slices=4))
        low, high = sorted(rng.uniform(size=2).tolist())
        g_low, g_high = build_dbg(table, low), build_dbg(table, high)
        for t in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]:
            assert g_high.edges.value_at(t) <= g_low.edges.value_at(t)


def test_smoothing_monotonicity(rng):
    for _ in range(10):
        dbg = build_dbg(strength_table(random_dbn(rng, n_variables=4, n_slices=5)), 0.3)
        small, large = smooth_dbg(dbg, 0.4), smooth_dbg(dbg, 1.1)
        for t in rng.uniform(0, dbg.horizon, size=40).tolist():
            assert small.edges.value_at(t) <= large.edges.value_at(t)


def test_serialize(worked_example):
    dbg = build_dbg(strength_table(worked_example), 0.3)
    data = serialize_dbg(dbg)
    assert data["critical_times"] == [1.0]
    assert ["X1", "X3"] in data["slices"][0]
    assert ["X1", "X3"] not in data["slices"][1]
    assert data["slices"][1] == sorted(data["slices"][1])
