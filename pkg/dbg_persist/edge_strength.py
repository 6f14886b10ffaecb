"""Distribution divergences, stochastic-matrix diameters and edge strengths.

The strength of an intra-slice edge ``j -> i`` at slice ``k`` is the largest
upper diameter among the sub-tables ``P_{i|x}`` of the child's CPT, one per
configuration ``x`` of the child's other parents (intra and inter-slice). Each
sub-table has one row per state of ``j``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Final, Iterator, Mapping, Sequence

import numpy as np
from scipy.special import rel_entr

from .dbn_model import Cpt, Dbn, ParentRef

__all__ = [
    "Divergence",
    "divergence_eval",
    "pairwise_divergences",
    "upper_diameter",
    "lower_diameter",
    "sub_tables",
    "edge_strength",
    "strength_table",
    "EdgeStrengthTable",
    "mutual_information",
]

logger = logging.getLogger(__name__)

_PROB_TOLERANCE: Final = 1e-9


class Divergence(str, Enum):
    TOTAL_VARIATION = "tv"
    SYMMETRIZED_KL = "kl"
    HELLINGER = "hellinger"
    BHATTACHARYYA = "bhattacharyya"

    @classmethod
    def parse(cls, value: str | Divergence) -> Divergence:
        """Accept the short CLI token or the long name (``total_variation``)."""
        if isinstance(value, Divergence):
            return value
        token = value.strip().lower()
        for member in cls:
            if token in (member.value, member.name.lower()):
                return member
        raise ValueError(f"unknown divergence '{value}' (choose from {', '.join(m.value for m in cls)})")


def _as_stochastic(P: Sequence[Sequence[float]] | np.ndarray, what: str = "matrix") -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValueError(f"{what} must be a nonempty 2-D array, got shape {P.shape}")
    if not np.all(np.isfinite(P)) or np.any(P < 0):
        raise ValueError(f"{what} has negative or non-finite entries")
    sums = P.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > _PROB_TOLERANCE):
        raise ValueError(f"{what} rows must sum to 1 (got {sums.tolist()})")
    return P


def pairwise_divergences(P: Sequence[Sequence[float]] | np.ndarray, kind: Divergence | str = Divergence.TOTAL_VARIATION) -> np.ndarray:
    """Symmetric ``n x n`` matrix of divergences between the rows of *P*.

    Bitwise identical rows get exactly 0 under every kind.
    """
    kind = Divergence.parse(kind)
    P = _as_stochastic(P)
    left, right = P[:, None, :], P[None, :, :]

    if kind is Divergence.TOTAL_VARIATION:
        D = 0.5 * np.abs(left - right).sum(axis=-1)
    elif kind is Divergence.SYMMETRIZED_KL:
        forward = rel_entr(left, right).sum(axis=-1)
        D = forward + forward.T
    elif kind is Divergence.HELLINGER:
        D = np.sqrt(((np.sqrt(left) - np.sqrt(right)) ** 2).sum(axis=-1)) / math.sqrt(2.0)
    else:
        overlap = np.sqrt(left * right).sum(axis=-1)
        with np.errstate(divide="ignore"):
            D = np.where(overlap > 0, -np.log(np.where(overlap > 0, overlap, 1.0)), np.inf)

    same = (left == right).all(axis=-1)
    D = np.where(same, 0.0, D)
    return np.maximum(D, 0.0)


def divergence_eval(kind: Divergence | str, p: Sequence[float], q: Sequence[float]) -> float:
    """Divergence between two probability vectors of equal length."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.ndim != 1 or q.ndim != 1 or p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    D = pairwise_divergences(np.vstack([p, q]), kind)
    return float(D[0, 1])


def _off_diagonal(P, kind) -> np.ndarray:
    D = pairwise_divergences(P, kind)
    return D[np.triu_indices(D.shape[0], k=1)]


def upper_diameter(P: Sequence[Sequence[float]] | np.ndarray, kind: Divergence | str = Divergence.TOTAL_VARIATION) -> float:
    """Largest divergence between distinct rows; 0 for a single row."""
    values = _off_diagonal(P, kind)
    return float(values.max()) if values.size else 0.0


def lower_diameter(P: Sequence[Sequence[float]] | np.ndarray, kind: Divergence | str = Divergence.TOTAL_VARIATION) -> float:
    """Smallest divergence between distinct rows; 0 for a single row."""
    values = _off_diagonal(P, kind)
    return float(values.min()) if values.size else 0.0


def sub_tables(cpt: Cpt, parent_position: int, cardinalities: Sequence[int]) -> list[np.ndarray]:
    """Sub-CPTs ``P_{i|x}`` whose rows vary only the parent at *parent_position*.

    Args:
        cpt: The child's CPT.
        parent_position: Index of the varying parent in ``cpt.parents``.
        cardinalities: State counts of ``cpt.parents`` in order.

    Returns:
        One matrix per configuration ``x`` of the remaining parents, in
        lexicographic order (first remaining parent slowest).
    """
    if len(cardinalities) != len(cpt.parents):
        raise ValueError("one cardinality per parent is required")
    if not 0 <= parent_position < len(cpt.parents):
        raise ValueError(f"parent position {parent_position} out of range")
    M = cpt.matrix
    n_states = M.shape[1]
    tensor = M.reshape(*cardinalities, n_states)
    tensor = np.moveaxis(tensor, parent_position, -2)
    flat = tensor.reshape(-1, cardinalities[parent_position], n_states)
    return [flat[i] for i in range(flat.shape[0])]


def edge_strength(dbn: Dbn, k: int, edge: tuple[str, str], kind: Divergence | str = Divergence.TOTAL_VARIATION) -> float:
    """``delta^(k)_{ji}`` for the intra-slice edge ``(j, i)``."""
    parent, child = edge
    if edge not in dbn.intra_edges:
        raise ValueError(f"edge {parent} -> {child} is not an intra-slice edge")
    if not 0 <= k <= dbn.last_slice:
        raise ValueError(f"slice {k} out of range 0..{dbn.last_slice}")
    cpt = dbn.cpt(k, child)
    position = cpt.parent_position(ParentRef(parent))
    cards = dbn.cardinalities(cpt)
    return max(upper_diameter(table, kind) for table in sub_tables(cpt, position, cards))


@dataclass(frozen=True, slots=True)
class EdgeStrengthTable:
    """Strengths of every intra-slice edge at every slice ``0..K``."""

    variables: tuple[str, ...]
    delta_t: float
    divergence: Divergence
    slices: tuple[Mapping[tuple[str, str], float], ...]

    @property
    def last_slice(self) -> int:
        return len(self.slices) - 1

    def value(self, k: int, edge: tuple[str, str]) -> float:
        return self.slices[k][edge]

    def rows(self) -> Iterator[tuple[int, str, str, float]]:
        """``(slice, parent, child, strength)`` ordered by slice, parent, child."""
        for k, values in enumerate(self.slices):
            for parent, child in sorted(values):
                yield k, parent, child, values[(parent, child)]

    def to_records(self) -> list[dict]:
        return [{"slice": k, "parent": p, "child": c, "strength": v} for k, p, c, v in self.rows()]


def strength_table(dbn: Dbn, kind: Divergence | str = Divergence.TOTAL_VARIATION) -> EdgeStrengthTable:
    """Strength of every intra-slice edge at every slice.

    Args:
        dbn: Validated network.
        kind: Divergence used between sub-table rows (enum or its name).

    Returns:
        EdgeStrengthTable with one ``{edge: strength}`` mapping per slice.
    """
    kind = Divergence.parse(kind)
    slices = []
    for k in range(dbn.last_slice + 1):
        values = {edge: edge_strength(dbn, k, edge, kind) for edge in dbn.intra_edges}
        logger.debug("slice %d strengths: %s", k, values)
        slices.append(values)
    logger.info("Computed %s strengths for %d edges over %d slices", kind.value, len(dbn.intra_edges), len(slices))
    return EdgeStrengthTable(variables=dbn.names, delta_t=dbn.delta_t, divergence=kind, slices=tuple(slices))


def mutual_information(joint: Sequence[Sequence[float]] | np.ndarray) -> float:
    """Mutual information (natural log) of a joint distribution matrix."""
    joint = np.asarray(joint, dtype=float)
    if joint.ndim != 2 or joint.size == 0:
        raise ValueError(f"joint must be a nonempty 2-D array, got shape {joint.shape}")
    if not np.all(np.isfinite(joint)) or np.any(joint < 0):
        raise ValueError("joint has negative or non-finite entries")
    if abs(joint.sum() - 1.0) > _PROB_TOLERANCE:
        raise ValueError(f"joint must sum to 1, got {joint.sum()}")
    product = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    return max(float(rel_entr(joint, product).sum()), 0.0)
