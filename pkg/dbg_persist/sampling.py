"""Random instances for property checks and the ``sample`` command.

Every generator draws exclusively from the ``numpy.random.Generator`` it is
given, so a fixed seed reproduces the instance exactly.
"""
from __future__ import annotations

import numpy as np

from .dbn_model import Cpt, Dbn, DbnValidationError, Slice, Variable, validate_dbn
from .formigram import Formigram, Partition, finest_common_coarsening
from .timeline import Timeline
from .zigzag import BarInterval, Barcode

__all__ = ["random_dbn", "random_partition", "random_formigram", "random_barcode"]


def random_dbn(
    rng: np.random.Generator,
    n_variables: int = 4,
    n_slices: int = 3,
    *,
    edge_prob: float = 0.5,
    inter_prob: float = 0.3,
    delta_t: float = 1.0,
) -> Dbn:
    """Binary variables ``X1..Xn`` over a random DAG with Dirichlet CPT rows."""
    if n_variables < 1 or n_slices < 1:
        raise ValueError("need at least one variable and one slice")
    names = [f"X{i}" for i in range(1, n_variables + 1)]
    order = [names[i] for i in rng.permutation(n_variables)]
    intra = [
        (order[i], order[j])
        for i in range(n_variables)
        for j in range(i + 1, n_variables)
        if rng.random() < edge_prob
    ]
    inter = [(p, c) for p in names for c in names if rng.random() < inter_prob]
    variables = tuple(Variable(name, ("0", "1")) for name in names)

    skeleton = Dbn(variables=variables, delta_t=delta_t, intra_edges=tuple(intra), inter_edges=tuple(inter), slices=())
    slices = []
    for k in range(n_slices):
        cpts = []
        for name in names:
            parents = skeleton.expected_parents(name, k)
            rows = rng.dirichlet(np.ones(2), size=2 ** len(parents))
            cpts.append(Cpt(child=name, parents=parents, rows=tuple(tuple(float(p) for p in row) for row in rows)))
        slices.append(Slice(k=k, cpts=tuple(cpts)))

    dbn = Dbn(variables=variables, delta_t=delta_t, intra_edges=tuple(intra), inter_edges=tuple(inter), slices=tuple(slices))
    violations = validate_dbn(dbn)
    if violations:
        raise DbnValidationError(violations)
    return dbn


def random_partition(rng: np.random.Generator, elements: list[str]) -> Partition:
    n_labels = int(rng.integers(1, len(elements) + 1)) if elements else 1
    labels = rng.integers(0, n_labels, size=len(elements))
    blocks: dict[int, set[str]] = {}
    for element, label in zip(elements, labels.tolist()):
        blocks.setdefault(label, set()).add(element)
    return frozenset(frozenset(b) for b in blocks.values())


def _coarsen_once(rng: np.random.Generator, partition: Partition) -> Partition:
    blocks = sorted(partition, key=sorted)
    if len(blocks) < 2:
        return partition
    i, j = rng.choice(len(blocks), size=2, replace=False).tolist()
    merged = blocks[i] | blocks[j]
    return frozenset([merged, *(b for k, b in enumerate(blocks) if k not in (i, j))])


def random_formigram(
    rng: np.random.Generator,
    n_elements: int = 5,
    n_criticals: int = 3,
    horizon: float = 1.0,
) -> Formigram:
    """Random interval partitions; each critical partition coarsens both neighbours."""
    elements = [f"v{i}" for i in range(n_elements)]
    grid = 4 * n_criticals + 1
    steps = sorted(rng.choice(np.arange(1, grid), size=n_criticals, replace=False).tolist())
    times = tuple(horizon * s / grid for s in steps)

    intervals = [random_partition(rng, elements) for _ in range(n_criticals + 1)]
    criticals = []
    for left, right in zip(intervals, intervals[1:]):
        partition = finest_common_coarsening([left, right])
        if rng.random() < 0.3:
            partition = _coarsen_once(rng, partition)
        criticals.append(partition)

    timeline = Timeline(
        horizon=horizon,
        breakpoints=times,
        interval_values=tuple(intervals),
        breakpoint_values=tuple(criticals),
    ).compressed()
    return Formigram(ground_set=frozenset(elements), partitions=timeline)


def random_barcode(rng: np.random.Generator, n_bars: int = 5, horizon: float = 10.0) -> Barcode:
    bars = []
    for _ in range(n_bars):
        birth, death = sorted(rng.uniform(0.0, horizon, size=2).tolist())
        if birth == death:
            bars.append(BarInterval(birth, death))
            continue
        birth_closed, death_closed = (bool(x) for x in rng.integers(0, 2, size=2))
        bars.append(BarInterval(birth, death, birth_closed, death_closed))
    return Barcode.of(bars)
