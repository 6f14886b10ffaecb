"""Formigrams: path-component partitions of a dynamic graph over time.

A partition is a frozenset of frozenset blocks covering the ground set. A
:class:`Formigram` keeps one partition per open interval and one per critical
time; partitions on either side of a critical time refine the partition at it.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, FrozenSet, Iterable, Literal, Sequence

import networkx as nx

from .dynamic_graph import DynamicBayesianGraph, snapshot
from .timeline import Timeline
from .unionfind import UnionFind

__all__ = [
    "Partition",
    "Formigram",
    "Event",
    "path_components",
    "finest_common_coarsening",
    "refines",
    "sorted_blocks",
    "formigram_of",
    "detect_events",
    "smooth_formigram",
    "check_formigram_axioms",
    "clusters_at_slice",
    "serialize_formigram",
]

logger = logging.getLogger(__name__)

Partition = FrozenSet[FrozenSet[str]]


def sorted_blocks(partition: Iterable[Iterable[str]]) -> list[list[str]]:
    """Blocks as sorted name lists, ordered lexicographically."""
    return sorted(sorted(block) for block in partition)


def path_components(graph: nx.Graph) -> Partition:
    return frozenset(frozenset(component) for component in nx.connected_components(graph))


def _ground(partition: Partition) -> frozenset[str]:
    return frozenset().union(*partition)


def finest_common_coarsening(partitions: Sequence[Partition]) -> Partition:
    """Transitive closure of the union of the partitions' block relations."""
    if not partitions:
        raise ValueError("need at least one partition")
    ground = _ground(partitions[0])
    for partition in partitions[1:]:
        if _ground(partition) != ground:
            raise ValueError("partitions are over different ground sets")
    if len(partitions) == 1:
        return partitions[0]
    uf = UnionFind(ground)
    for partition in partitions:
        for block in partition:
            uf.union_all(block)
    return frozenset(uf.components())


def refines(fine: Partition, coarse: Partition) -> bool:
    """True iff every block of *fine* lies inside one block of *coarse*."""
    return all(any(block <= target for target in coarse) for block in fine)


@dataclass(frozen=True, slots=True)
class Formigram:
    ground_set: frozenset[str]
    partitions: Timeline[Partition]

    @property
    def horizon(self) -> float:
        return self.partitions.horizon

    @property
    def times(self) -> tuple[float, ...]:
        """Critical times ``c_1 < ... < c_m``."""
        return self.partitions.breakpoints

    @property
    def interval_partitions(self) -> tuple[Partition, ...]:
        return self.partitions.interval_values

    @property
    def critical_partitions(self) -> tuple[Partition, ...]:
        return self.partitions.breakpoint_values

    def partition_at(self, t: float) -> Partition:
        return self.partitions.value_at(t)


def formigram_of(dbg: DynamicBayesianGraph) -> Formigram:
    """Path components of *dbg* over time, keeping only genuine changes."""
    vertices = dbg.vertices

    def _components(edges) -> Partition:
        graph = nx.Graph()
        graph.add_nodes_from(vertices)
        graph.add_edges_from(edges)
        return path_components(graph)

    partitions = dbg.edges.map(_components).compressed()
    logger.info("Formigram has %d critical times", len(partitions.breakpoints))
    return Formigram(ground_set=frozenset(vertices), partitions=partitions)


@dataclass(frozen=True, slots=True)
class Event:
    time: float
    kind: Literal["merge", "disband"]
    blocks_before: tuple[tuple[str, ...], ...]
    blocks_after: tuple[tuple[str, ...], ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "time": self.time,
            "kind": self.kind,
            "blocks_before": [list(b) for b in self.blocks_before],
            "blocks_after": [list(b) for b in self.blocks_after],
        }


def _block_tuple(block: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(block))


def detect_events(fg: Formigram) -> list[Event]:
    """Pairwise merge and disband events, chronological, merges first.

    A merge is two distinct blocks of the left interval inside one block of
    the critical partition; a disband is the same with the right interval.
    """
    events: list[Event] = []
    for i, t in enumerate(fg.times):
        critical = sorted(fg.critical_partitions[i], key=_block_tuple)
        left, right = fg.interval_partitions[i], fg.interval_partitions[i + 1]
        merges, disbands = [], []
        for target in critical:
            whole = _block_tuple(target)
            inside_left = sorted((_block_tuple(b) for b in left if b <= target))
            inside_right = sorted((_block_tuple(b) for b in right if b <= target))
            for a, b in itertools.combinations(inside_left, 2):
                merges.append(Event(time=t, kind="merge", blocks_before=(a, b), blocks_after=(whole,)))
            for a, b in itertools.combinations(inside_right, 2):
                disbands.append(Event(time=t, kind="disband", blocks_before=(whole,), blocks_after=(a, b)))
        events += merges + disbands
    return events


def smooth_formigram(fg: Formigram, eps: float) -> Formigram:
    """Finest common coarsening over the clipped window ``[t - eps, t + eps]``."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    return Formigram(ground_set=fg.ground_set, partitions=fg.partitions.smooth(eps, finest_common_coarsening))


def check_formigram_axioms(fg: Formigram) -> list[str]:
    """Check that *fg* is a well-formed formigram.

    Every partition must cover the ground set exactly, critical times must lie
    strictly inside the domain and each critical partition must be refined by
    both neighbouring interval partitions.

    Returns:
        Human-readable violations; empty when the formigram is valid.
    """
    violations: list[str] = []
    tl = fg.partitions

    def _cover(partition: Partition, where: str) -> None:
        members = [x for block in partition for x in block]
        if any(not block for block in partition):
            violations.append(f"empty block in partition {where}")
        if len(members) != len(set(members)):
            violations.append(f"overlapping blocks in partition {where}")
        if set(members) != fg.ground_set:
            violations.append(f"partition {where} does not cover the ground set exactly")

    for i, partition in enumerate(tl.interval_values):
        _cover(partition, f"interval_{i}")
    for i, partition in enumerate(tl.breakpoint_values):
        _cover(partition, f"crit_{i}")

    if any(not 0 < t < tl.horizon for t in tl.breakpoints):
        violations.append("critical times must lie strictly inside the domain")
    if list(tl.breakpoints) != sorted(set(tl.breakpoints)):
        violations.append("critical times must be strictly increasing")

    for i, t in enumerate(tl.breakpoints):
        critical = tl.breakpoint_values[i]
        for side, partition in (("left", tl.interval_values[i]), ("right", tl.interval_values[i + 1])):
            if not refines(partition, critical):
                violations.append(f"{side} partition does not refine the critical partition at t={t:g}")
    return violations


def clusters_at_slice(dbg: DynamicBayesianGraph, k: int) -> tuple[float, list[list[str]]]:
    """Cluster families of slice *k*, read at ``t* = (2k + 1) * dt / 2``.

    Returns:
        ``(t*, blocks)`` with blocks sorted; block ``c`` is cluster ``c + 1``.
    """
    if not 0 <= k < dbg.num_slices:
        raise ValueError(f"slice {k} out of range 0..{dbg.num_slices - 1}")
    t_star = (2 * k + 1) * dbg.delta_t / 2
    return t_star, sorted_blocks(path_components(snapshot(dbg, t_star)))


def serialize_formigram(fg: Formigram) -> dict[str, Any]:
    partitions: dict[str, list[list[str]]] = {}
    for i, partition in enumerate(fg.interval_partitions):
        partitions[f"interval_{i}"] = sorted_blocks(partition)
    for i, partition in enumerate(fg.critical_partitions):
        partitions[f"crit_{i}"] = sorted_blocks(partition)
    return {"times": list(fg.times), "partitions": partitions}
