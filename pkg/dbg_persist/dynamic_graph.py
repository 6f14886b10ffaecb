"""Dynamic Bayesian graphs: thresholded strength tables as dynamic graphs.

The vertex set is constant. Edges are undirected name pairs stored sorted;
self-loops are implicit and never stored. Slice ``k`` is active on the open
interval ``(k*dt, (k+1)*dt)``; at every interior multiple of ``dt`` the edge
set is the union of the two adjacent slices (maximum convention).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, FrozenSet, Sequence

import networkx as nx

from .edge_strength import EdgeStrengthTable
from .timeline import Timeline

__all__ = [
    "Edge",
    "EdgeSet",
    "DynamicBayesianGraph",
    "edge_key",
    "build_dbg",
    "snapshot",
    "smooth_dbg",
    "check_dg_axioms",
    "serialize_dbg",
]

logger = logging.getLogger(__name__)

Edge = tuple[str, str]
EdgeSet = FrozenSet[Edge]


def edge_key(a: str, b: str) -> Edge:
    return (a, b) if a <= b else (b, a)


def _union(values: Sequence[EdgeSet]) -> EdgeSet:
    return frozenset().union(*values)


@dataclass(frozen=True, slots=True)
class DynamicBayesianGraph:
    vertices: tuple[str, ...]
    delta_t: float
    eta: float
    edges: Timeline[EdgeSet]

    @property
    def horizon(self) -> float:
        return self.edges.horizon

    @property
    def num_slices(self) -> int:
        return max(1, round(self.horizon / self.delta_t))

    @property
    def critical_times(self) -> tuple[float, ...]:
        """Breakpoints where the edge set genuinely changes."""
        tl = self.edges
        return tuple(
            b
            for i, b in enumerate(tl.breakpoints)
            if not tl.interval_values[i] == tl.breakpoint_values[i] == tl.interval_values[i + 1]
        )

    @property
    def critical_edges(self) -> dict[float, EdgeSet]:
        return {t: self.edges.value_at(t) for t in self.critical_times}

    @property
    def slice_edges(self) -> tuple[EdgeSet, ...]:
        """Edge set in the interior of each slice (taken at its midpoint)."""
        return tuple(self.edges.value_at((k + 0.5) * self.delta_t) for k in range(self.num_slices))


def build_dbg(table: EdgeStrengthTable, eta: float, delta_t: float | None = None) -> DynamicBayesianGraph:
    """Threshold *table* at *eta* (strictly) and glue the slices in time.

    Args:
        table: Strengths for every slice ``0..K``.
        eta: Threshold; an edge is kept at slice ``k`` iff its strength
            exceeds *eta*. Infinite strengths exceed every finite threshold.
        delta_t: Slice length; defaults to the table's.
    """
    delta_t = table.delta_t if delta_t is None else float(delta_t)
    if not (math.isfinite(delta_t) and delta_t > 0):
        raise ValueError(f"delta_t must be positive, got {delta_t}")
    if math.isnan(eta):
        raise ValueError("eta must be a number")

    slices: list[EdgeSet] = []
    for k, values in enumerate(table.slices):
        kept = frozenset(edge_key(p, c) for (p, c), strength in values.items() if strength > eta)
        logger.debug("slice %d keeps %d of %d edges at eta=%s", k, len(kept), len(values), eta)
        slices.append(kept)

    n = len(slices)
    timeline = Timeline(
        horizon=n * delta_t,
        breakpoints=tuple(k * delta_t for k in range(1, n)),
        interval_values=tuple(slices),
        breakpoint_values=tuple(slices[k - 1] | slices[k] for k in range(1, n)),
    )
    dbg = DynamicBayesianGraph(vertices=tuple(table.variables), delta_t=delta_t, eta=float(eta), edges=timeline)
    logger.info("Built DBG with %d slices and %d critical times", n, len(dbg.critical_times))
    return dbg


def snapshot(dbg: DynamicBayesianGraph, t: float) -> nx.Graph:
    """The undirected graph at time *t* (self-loops left implicit)."""
    graph = nx.Graph()
    graph.add_nodes_from(dbg.vertices)
    graph.add_edges_from(dbg.edges.value_at(t))
    return graph


def smooth_dbg(dbg: DynamicBayesianGraph, eps: float) -> DynamicBayesianGraph:
    """Union of snapshots over the window ``[t - eps, t + eps]`` clipped to the domain."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    return replace(dbg, edges=dbg.edges.smooth(eps, _union))


def check_dg_axioms(dbg: DynamicBayesianGraph) -> list[str]:
    """Return the dynamic-graph axiom violations of *dbg* (empty iff none)."""
    violations: list[str] = []
    tl = dbg.edges
    vertices = set(dbg.vertices)

    # self-loops and lifespan: every edge endpoint must be a live vertex
    edges = (0.0, *tl.breakpoints, tl.horizon)
    samples = [((a + b) / 2, value) for a, b, value in zip(edges, edges[1:], tl.interval_values)]
    samples += list(zip(tl.breakpoints, tl.breakpoint_values))
    for t, value in sorted(samples, key=lambda s: s[0]):
        for a, b in sorted(value):
            for endpoint in (a, b):
                if endpoint not in vertices:
                    violations.append(f"missing self-loop: vertex {endpoint} of edge {a}-{b} at t={t:g}")

    # tameness
    if any(not math.isfinite(b) or b <= 0 or b >= tl.horizon for b in tl.breakpoints):
        violations.append("tameness: critical times must lie strictly inside the domain")
    grid = all(abs(b / dbg.delta_t - round(b / dbg.delta_t)) < 1e-9 for b in tl.breakpoints)
    if grid and len(dbg.critical_times) > dbg.num_slices - 1:
        violations.append(f"tameness: {len(dbg.critical_times)} critical times for {dbg.num_slices} slices")

    # comparability
    for i, t in enumerate(tl.breakpoints):
        point = tl.breakpoint_values[i]
        for side, value in (("left", tl.interval_values[i]), ("right", tl.interval_values[i + 1])):
            for a, b in sorted(value - point):
                violations.append(f"comparability violated at t={t:g}: {side} edge {a}-{b} missing at the critical time")
    return violations


def serialize_dbg(dbg: DynamicBayesianGraph) -> dict[str, Any]:
    """JSON-ready view of *dbg*: per-slice edge lists sorted for stable output."""
    return {
        "delta_t": dbg.delta_t,
        "eta": dbg.eta,
        "slices": [sorted([list(e) for e in edges]) for edges in dbg.slice_edges],
        "critical_times": list(dbg.critical_times),
    }
