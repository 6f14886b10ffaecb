"""Bottleneck distance between barcodes and the smoothing stability harness."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Final, Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dynamic_graph import DynamicBayesianGraph
from .formigram import formigram_of, smooth_formigram
from .zigzag import BarInterval, Barcode, zigzag_barcode

__all__ = [
    "STABILITY_SLACK",
    "EXHAUSTIVE_LIMIT",
    "Matching",
    "StabilityReport",
    "ComparisonReport",
    "bottleneck_distance",
    "bottleneck_matching",
    "bottleneck_exhaustive",
    "interleaving_lower_bound",
    "stability_check",
    "compare_barcodes",
]

logger = logging.getLogger(__name__)

STABILITY_SLACK: Final = 1e-9
EXHAUSTIVE_LIMIT: Final = 6


@dataclass(frozen=True, slots=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    unmatched_a: tuple[int, ...]
    unmatched_b: tuple[int, ...]
    cost: float


def _bars(barcode: Barcode | Iterable[BarInterval]) -> list[BarInterval]:
    bars = list(barcode.bars if isinstance(barcode, Barcode) else barcode)
    if any(not (math.isfinite(b.birth) and math.isfinite(b.death)) for b in bars):
        raise ValueError("bottleneck distance needs finite bars")
    return bars


def _pair_cost(x: BarInterval, y: BarInterval) -> float:
    # endpoint open/closed flags do not enter the metric
    return max(abs(x.birth - y.birth), abs(x.death - y.death))


def _half(x: BarInterval) -> float:
    return (x.death - x.birth) / 2


def _assignment(a: list[BarInterval], b: list[BarInterval], threshold: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Solve the 0/1 augmented assignment; total 0 iff a matching of cost <= threshold exists."""
    n, m = len(a), len(b)
    blocked = np.ones((n + m, m + n))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if _pair_cost(x, y) <= threshold:
                blocked[i, j] = 0
        if _half(x) <= threshold:
            blocked[i, m + i] = 0
    for j, y in enumerate(b):
        if _half(y) <= threshold:
            blocked[n + j, j] = 0
    blocked[n:, m:] = 0
    rows, cols = linear_sum_assignment(blocked)
    return rows, cols, float(blocked[rows, cols].sum())


def bottleneck_matching(a: Barcode | Iterable[BarInterval], b: Barcode | Iterable[BarInterval]) -> Matching:
    """Optimal partial matching between *a* and *b*.

    Matching two bars costs the larger endpoint displacement; leaving a bar
    unmatched costs half its length. The optimum is found by binary search
    over the candidate costs with a bipartite feasibility test.
    """
    xs, ys = _bars(a), _bars(b)
    if not xs and not ys:
        return Matching(pairs=(), unmatched_a=(), unmatched_b=(), cost=0.0)

    candidates = {0.0}
    candidates.update(_half(x) for x in xs)
    candidates.update(_half(y) for y in ys)
    candidates.update(_pair_cost(x, y) for x in xs for y in ys)
    ordered = sorted(candidates)

    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _assignment(xs, ys, ordered[mid])[2] == 0:
            hi = mid
        else:
            lo = mid + 1
    rows, cols, _ = _assignment(xs, ys, ordered[lo])

    n, m = len(xs), len(ys)
    pairs, unmatched_a, unmatched_b = [], [], []
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r < n and c < m:
            pairs.append((r, c))
        elif r < n:
            unmatched_a.append(r)
        elif c < m:
            unmatched_b.append(c)
    costs = [_pair_cost(xs[i], ys[j]) for i, j in pairs]
    costs += [_half(xs[i]) for i in unmatched_a] + [_half(ys[j]) for j in unmatched_b]
    return Matching(
        pairs=tuple(sorted(pairs)),
        unmatched_a=tuple(sorted(unmatched_a)),
        unmatched_b=tuple(sorted(unmatched_b)),
        cost=max(costs, default=0.0),
    )


def bottleneck_distance(a: Barcode | Iterable[BarInterval], b: Barcode | Iterable[BarInterval]) -> float:
    return bottleneck_matching(a, b).cost


def bottleneck_exhaustive(a: Barcode | Iterable[BarInterval], b: Barcode | Iterable[BarInterval]) -> float:
    """Bottleneck distance by enumerating every partial matching (small inputs)."""
    xs, ys = _bars(a), _bars(b)
    if len(xs) > EXHAUSTIVE_LIMIT or len(ys) > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive matching limited to {EXHAUSTIVE_LIMIT} bars per side")

    def _best(i: int, used: frozenset[int], worst: float) -> float:
        if i == len(xs):
            rest = [_half(ys[j]) for j in range(len(ys)) if j not in used]
            return max([worst, *rest])
        best = _best(i + 1, used, max(worst, _half(xs[i])))
        for j in range(len(ys)):
            if j not in used:
                best = min(best, _best(i + 1, used | {j}, max(worst, _pair_cost(xs[i], ys[j]))))
        return best

    return _best(0, frozenset(), 0.0)


def interleaving_lower_bound(a: Barcode | Iterable[BarInterval], b: Barcode | Iterable[BarInterval]) -> float:
    """Half the bottleneck distance, a lower bound on the interleaving distance."""
    return bottleneck_distance(a, b) / 2


@dataclass(frozen=True, slots=True)
class StabilityReport:
    eps: float
    lhs: float
    bound: float
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {"eps": self.eps, "lhs": self.lhs, "bound": self.bound, "pass": self.passed}


def stability_check(dbg: DynamicBayesianGraph, eps: float) -> StabilityReport:
    """Compare the barcode of the eps-smoothed formigram with the original."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    fg = formigram_of(dbg)
    original = zigzag_barcode(fg)
    smoothed = zigzag_barcode(smooth_formigram(fg, eps))
    lhs = bottleneck_distance(smoothed, original)
    report = StabilityReport(eps=eps, lhs=lhs, bound=eps, passed=lhs <= eps + STABILITY_SLACK)
    log = logger.info if report.passed else logger.error
    log("Stability at eps=%s: d_B=%s (%s)", eps, lhs, "pass" if report.passed else "FAIL")
    return report


@dataclass(frozen=True, slots=True)
class ComparisonReport:
    bottleneck: float
    interleaving_lower_bound: float
    matching: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "bottleneck": self.bottleneck,
            "interleaving_lower_bound": self.interleaving_lower_bound,
            "matching": self.matching,
        }


def compare_barcodes(a: Barcode, b: Barcode) -> ComparisonReport:
    """Bottleneck distance, interleaving lower bound and the matching behind them."""
    matching = bottleneck_matching(a, b)
    entries: list[dict[str, Any]] = [
        {"a": i, "b": j, "cost": _pair_cost(a.bars[i], b.bars[j])} for i, j in matching.pairs
    ]
    entries += [{"a": i, "b": None, "cost": _half(a.bars[i])} for i in matching.unmatched_a]
    entries += [{"a": None, "b": j, "cost": _half(b.bars[j])} for j in matching.unmatched_b]
    return ComparisonReport(
        bottleneck=matching.cost,
        interleaving_lower_bound=matching.cost / 2,
        matching=entries,
    )
