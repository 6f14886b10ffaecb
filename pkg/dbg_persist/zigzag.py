"""H0 zigzag barcodes of formigrams.

The indexing set interleaves criticals ``c_0 = 0 < c_1 < ... < c_m = T`` with
one subdivision point ``s_i`` inside every ``(c_i, c_{i+1})``. Laid out as a
sequence, K-point ``2i`` is ``c_i`` and ``2i + 1`` is ``s_i``; the spaces
spanned by the partitions along it form the zigzag

    c_0 <- s_0 -> c_1 <- s_1 -> ... -> c_m

whose maps send each block to the block containing it.

Every map is a surjection of partitions, so the number of bars covering a
K-segment ``[a, b]`` is the number of blocks of the finest common coarsening
of the partitions at ``a..b``. Bar multiplicities follow by
inclusion-exclusion over those counts.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, Literal

from .formigram import Formigram, Partition
from .render import format_number
from .unionfind import UnionFind

__all__ = [
    "KPoint",
    "KInterval",
    "IndexingSet",
    "BarInterval",
    "Barcode",
    "build_indexing_set",
    "k_partitions",
    "psi_k",
    "segment_ranks",
    "zigzag_barcode",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, order=True)
class KPoint:
    kind: Literal["c", "s"]
    index: int

    @property
    def position(self) -> int:
        if self.kind == "c":
            return 2 * self.index
        if self.kind == "s":
            return 2 * self.index + 1
        raise ValueError(f"unbounded or unknown K-point kind '{self.kind}'")

    @classmethod
    def at(cls, position: int) -> KPoint:
        return cls("c", position // 2) if position % 2 == 0 else cls("s", position // 2)


@dataclass(frozen=True, slots=True)
class KInterval:
    left: KPoint
    right: KPoint


@dataclass(frozen=True, slots=True)
class IndexingSet:
    criticals: tuple[float, ...]
    subdivisions: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.criticals) < 1 or len(self.subdivisions) != len(self.criticals) - 1:
            raise ValueError("need one subdivision point between consecutive criticals")
        for i, s in enumerate(self.subdivisions):
            if not self.criticals[i] < s < self.criticals[i + 1]:
                raise ValueError(f"subdivision {s} not strictly inside ({self.criticals[i]}, {self.criticals[i + 1]})")

    @property
    def size(self) -> int:
        """Number of K-points."""
        return len(self.criticals) + len(self.subdivisions)

    def time(self, point: KPoint) -> float:
        return self.criticals[point.index] if point.kind == "c" else self.subdivisions[point.index]

    def points(self) -> list[KPoint]:
        return [KPoint.at(p) for p in range(self.size)]


@dataclass(frozen=True, slots=True)
class BarInterval:
    birth: float
    death: float
    birth_closed: bool = True
    death_closed: bool = True

    def __post_init__(self) -> None:
        if self.birth > self.death:
            raise ValueError(f"birth {self.birth} after death {self.death}")
        if self.birth == self.death and not (self.birth_closed and self.death_closed):
            raise ValueError("a degenerate bar must be closed at both ends")

    @property
    def length(self) -> float:
        return self.death - self.birth

    def contains(self, t: float) -> bool:
        above = t >= self.birth if self.birth_closed else t > self.birth
        below = t <= self.death if self.death_closed else t < self.death
        return above and below

    def sort_key(self) -> tuple:
        return (self.birth, self.death, not self.birth_closed, self.death_closed)

    def notation(self) -> str:
        return (
            f"{'[' if self.birth_closed else '('}{format_number(self.birth)}, "
            f"{format_number(self.death)}{']' if self.death_closed else ')'}"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "birth": self.birth,
            "death": self.death,
            "birth_closed": self.birth_closed,
            "death_closed": self.death_closed,
        }


@dataclass(frozen=True, slots=True)
class Barcode:
    """Multiset of bars, kept sorted by (birth, death)."""

    bars: tuple[BarInterval, ...] = ()

    @classmethod
    def of(cls, bars: Iterable[BarInterval]) -> Barcode:
        return cls(tuple(sorted(bars, key=BarInterval.sort_key)))

    def __len__(self) -> int:
        return len(self.bars)

    def alive_at(self, t: float) -> int:
        return sum(1 for bar in self.bars if bar.contains(t))

    def multiset(self) -> Counter:
        return Counter(self.bars)

    def to_records(self) -> list[dict[str, Any]]:
        return [bar.to_dict() for bar in self.bars]


def build_indexing_set(fg: Formigram, position: float = 0.5) -> IndexingSet:
    """Criticals ``{0} ∪ crit(fg) ∪ {T}`` with one point per gap.

    Args:
        fg: The formigram.
        position: Relative place of each subdivision point inside its gap;
            ``0.5`` gives midpoints.
    """
    if not 0 < position < 1:
        raise ValueError(f"position must be in (0, 1), got {position}")
    criticals = sorted({0.0, *fg.times, fg.horizon})
    subdivisions = tuple(a + position * (b - a) for a, b in zip(criticals, criticals[1:]))
    return IndexingSet(criticals=tuple(criticals), subdivisions=subdivisions)


def k_partitions(fg: Formigram, indexing: IndexingSet) -> list[Partition]:
    """The partition at every K-point, in K order."""
    return [fg.partition_at(indexing.time(point)) for point in indexing.points()]


def psi_k(interval: KInterval, indexing: IndexingSet) -> BarInterval:
    """Map a K-interval to a real interval with endpoint types.

    ``c`` endpoints stay closed at their own time. A left ``s_i`` opens at
    ``c_i`` and a right ``s_j`` opens at ``c_{j+1}``.
    """
    left, right = interval.left, interval.right
    if left.position > right.position:
        raise ValueError(f"malformed K-interval: {left} after {right}")
    n = len(indexing.criticals)
    for point in (left, right):
        limit = n if point.kind == "c" else n - 1
        if not 0 <= point.index < limit:
            raise ValueError(f"K-point {point} outside the indexing set")
    if left.kind == "c":
        birth, birth_closed = indexing.criticals[left.index], True
    else:
        birth, birth_closed = indexing.criticals[left.index], False
    if right.kind == "c":
        death, death_closed = indexing.criticals[right.index], True
    else:
        death, death_closed = indexing.criticals[right.index + 1], False
    return BarInterval(birth=birth, death=death, birth_closed=birth_closed, death_closed=death_closed)


def segment_ranks(partitions: list[Partition]) -> dict[tuple[int, int], int]:
    """Blocks of the finest common coarsening of ``partitions[a..b]``, for all ``a <= b``."""
    ranks: dict[tuple[int, int], int] = {}
    for a in range(len(partitions)):
        uf = UnionFind()
        for b in range(a, len(partitions)):
            for block in partitions[b]:
                uf.union_all(block)
            ranks[(a, b)] = uf.num_components
    return ranks


def zigzag_barcode(fg: Formigram, indexing: IndexingSet | None = None) -> Barcode:
    indexing = indexing or build_indexing_set(fg)
    partitions = k_partitions(fg, indexing)
    ranks = segment_ranks(partitions)
    last = len(partitions) - 1

    def rk(a: int, b: int) -> int:
        if a < 0 or b > last:
            return 0
        return ranks[(a, b)]

    bars: list[BarInterval] = []
    for (a, b), covering in ranks.items():
        multiplicity = covering - rk(a - 1, b) - rk(a, b + 1) + rk(a - 1, b + 1)
        if multiplicity < 0:
            raise RuntimeError(f"negative multiplicity {multiplicity} for K-interval [{a}, {b}]")
        if multiplicity:
            bar = psi_k(KInterval(KPoint.at(a), KPoint.at(b)), indexing)
            bars.extend([bar] * multiplicity)
    barcode = Barcode.of(bars)
    logger.info("Barcode has %d bars over %d K-points", len(barcode), len(partitions))
    return barcode
