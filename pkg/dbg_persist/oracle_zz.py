"""Brute-force zigzag decomposition over GF(2).

Builds the explicit module spanned by the partitions along the indexing set
and peels it into interval summands left to right. Vectors are sets of basis
indices; addition is symmetric difference and a vector's pivot is its largest
index. Only meant for small instances, see :data:`MAX_ELEMENTS` and
:data:`MAX_CRITICALS`.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Final, Literal

import numpy as np

from .formigram import Formigram
from .zigzag import (
    Barcode,
    IndexingSet,
    KInterval,
    KPoint,
    build_indexing_set,
    k_partitions,
    psi_k,
)

__all__ = [
    "MAX_ELEMENTS",
    "MAX_CRITICALS",
    "OracleGuardError",
    "ZigzagModule",
    "zigzag_module",
    "decompose",
    "oracle_barcode",
]

logger = logging.getLogger(__name__)

MAX_ELEMENTS: Final = 12
MAX_CRITICALS: Final = 16

Vector = frozenset[int]
_EMPTY: Final[Vector] = frozenset()


class OracleGuardError(ValueError):
    """The instance is too large for the brute-force oracle."""


@dataclass(frozen=True, eq=False)
class ZigzagModule:
    """Spaces and 0/1 maps of the zigzag ``c_0 <- s_0 -> c_1 <- ... -> c_m``.

    ``matrices[i]`` is the map between K-points ``i`` and ``i + 1``; for a
    ``backward`` arrow it goes from ``i + 1`` to ``i``. Its shape is
    ``(dim target, dim source)``.
    """

    points: tuple[KPoint, ...]
    bases: tuple[tuple[tuple[str, ...], ...], ...]
    directions: tuple[Literal["forward", "backward"], ...]
    matrices: tuple[np.ndarray, ...]

    @property
    def dimensions(self) -> tuple[int, ...]:
        return tuple(len(basis) for basis in self.bases)


def zigzag_module(fg: Formigram, indexing: IndexingSet | None = None) -> ZigzagModule:
    indexing = indexing or build_indexing_set(fg)
    partitions = k_partitions(fg, indexing)
    bases = tuple(tuple(sorted(tuple(sorted(b)) for b in partition)) for partition in partitions)

    directions: list[Literal["forward", "backward"]] = []
    matrices: list[np.ndarray] = []
    for i in range(len(bases) - 1):
        # c_i <- s_i is backward, s_i -> c_{i+1} is forward
        direction: Literal["forward", "backward"] = "backward" if i % 2 == 0 else "forward"
        source, target = (bases[i + 1], bases[i]) if direction == "backward" else (bases[i], bases[i + 1])
        matrix = np.zeros((len(target), len(source)), dtype=np.uint8)
        for col, block in enumerate(source):
            for row, container in enumerate(target):
                if set(block) <= set(container):
                    matrix[row, col] = 1
        directions.append(direction)
        matrices.append(matrix)
    return ZigzagModule(
        points=tuple(indexing.points()),
        bases=bases,
        directions=tuple(directions),
        matrices=tuple(matrices),
    )


# ---------------------------------------------------------------------------
# GF(2) reduction
# ---------------------------------------------------------------------------


def _columns(matrix: np.ndarray) -> list[Vector]:
    return [frozenset(np.flatnonzero(matrix[:, j]).tolist()) for j in range(matrix.shape[1])]


def _apply(columns: list[Vector], vec: Vector) -> Vector:
    image = _EMPTY
    for j in vec:
        image ^= columns[j]
    return image


def _reduce(vec: Vector, combo: Vector, table: dict[int, tuple[Vector, Vector]]) -> tuple[Vector, Vector]:
    while vec and max(vec) in table:
        pivot_vec, pivot_combo = table[max(vec)]
        vec ^= pivot_vec
        combo ^= pivot_combo
    return vec, combo


def _column_reduction(columns: list[Vector]) -> tuple[dict[int, tuple[Vector, Vector]], list[Vector]]:
    """Low-pivot column reduction; returns the pivot table and a kernel basis."""
    pivots: dict[int, tuple[Vector, Vector]] = {}
    kernel: list[Vector] = []
    for j, col in enumerate(columns):
        vec, combo = _reduce(col, frozenset({j}), pivots)
        if vec:
            pivots[max(vec)] = (vec, combo)
        else:
            kernel.append(combo)
    return pivots, kernel


@dataclass
class _Live:
    birth: int
    key: tuple[int, int]
    serial: int
    vec: Vector = field(default=_EMPTY)

    def order(self) -> tuple:
        return (self.key, self.serial)


def decompose(module: ZigzagModule) -> list[tuple[int, int]]:
    """Interval summands of *module* as ``(first, last)`` K-positions."""
    serial = itertools.count()
    live = [_Live(birth=0, key=(1, 0), serial=next(serial), vec=frozenset({r})) for r in range(module.dimensions[0])]
    intervals: list[tuple[int, int]] = []

    for p, (direction, matrix) in enumerate(zip(module.directions, module.matrices)):
        columns = _columns(matrix)
        live.sort(key=_Live.order)
        survivors: list[_Live] = []

        if direction == "forward":
            table: dict[int, tuple[Vector, Vector]] = {}
            for interval in live:
                image = _apply(columns, interval.vec)
                reduced, _ = _reduce(image, _EMPTY, table)
                if reduced:
                    table[max(reduced)] = (reduced, _EMPTY)
                    interval.vec = image
                    survivors.append(interval)
                else:
                    intervals.append((interval.birth, p))
            for r in range(module.dimensions[p + 1]):
                if r not in table:
                    survivors.append(_Live(birth=p + 1, key=(2, p + 1), serial=next(serial), vec=frozenset({r})))
        else:
            pivots, kernel = _column_reduction(columns)
            table = {low: (vec, _EMPTY) for low, (vec, _) in pivots.items()}
            by_serial = {interval.serial: interval.vec for interval in live}
            for interval in live:
                reduced, combo = _reduce(interval.vec, frozenset({interval.serial}), table)
                if reduced:
                    table[max(reduced)] = (reduced, combo)
                    intervals.append((interval.birth, p))
                    continue
                target = _EMPTY
                for s in combo:
                    target ^= by_serial[s]
                remainder, preimage = _reduce(target, _EMPTY, pivots)
                if remainder:
                    raise RuntimeError("surviving vector has no preimage")
                interval.vec = preimage
                survivors.append(interval)
            for vec in kernel:
                survivors.append(_Live(birth=p + 1, key=(0, -(p + 1)), serial=next(serial), vec=vec))
        live = survivors

    last = len(module.points) - 1
    intervals.extend((interval.birth, last) for interval in live)
    return intervals


def oracle_barcode(fg: Formigram, indexing: IndexingSet | None = None) -> Barcode:
    """Barcode by explicit GF(2) decomposition (desk-scale instances only).

    Raises:
        OracleGuardError: more than :data:`MAX_ELEMENTS` elements or more than
            :data:`MAX_CRITICALS` critical K-points.
    """
    indexing = indexing or build_indexing_set(fg)
    if len(fg.ground_set) > MAX_ELEMENTS or len(indexing.criticals) > MAX_CRITICALS:
        logger.warning(
            "Oracle refused: %d elements, %d critical points",
            len(fg.ground_set),
            len(indexing.criticals),
        )
        raise OracleGuardError(
            f"oracle limited to {MAX_ELEMENTS} elements and {MAX_CRITICALS} critical points, "
            f"got {len(fg.ground_set)} and {len(indexing.criticals)}"
        )
    module = zigzag_module(fg, indexing)
    summands = decompose(module)
    logger.debug("Oracle found %d summands", len(summands))
    return Barcode.of(psi_k(KInterval(KPoint.at(a), KPoint.at(b)), indexing) for a, b in summands)
