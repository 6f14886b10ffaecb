"""Piecewise-constant functions on a finite time domain ``[0, horizon]``.

A :class:`Timeline` stores sorted interior breakpoints ``b_1 < ... < b_m``, one
value per open interval ``(b_i, b_{i+1})`` (``m + 1`` of them, the outer ones
reaching to ``0`` and ``horizon``) and one value per breakpoint. The domain
endpoints take the value of their adjacent interval.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Generic, Sequence, TypeVar

__all__ = ["Timeline", "time_tolerance"]

T = TypeVar("T")
U = TypeVar("U")


def time_tolerance(horizon: float) -> float:
    """Absolute tolerance under which two times are considered equal."""
    return 1e-9 * max(1.0, horizon)


@dataclass(frozen=True, slots=True)
class Timeline(Generic[T]):
    horizon: float
    breakpoints: tuple[float, ...]
    interval_values: tuple[T, ...]
    breakpoint_values: tuple[T, ...]

    def __post_init__(self) -> None:
        if len(self.interval_values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one value per open interval")
        if len(self.breakpoint_values) != len(self.breakpoints):
            raise ValueError("need exactly one value per breakpoint")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def tolerance(self) -> float:
        return time_tolerance(self.horizon)

    @classmethod
    def constant(cls, horizon: float, value: T) -> Timeline[T]:
        return cls(horizon=horizon, breakpoints=(), interval_values=(value,), breakpoint_values=())

    def locate(self, t: float) -> tuple[str, int]:
        """Return ``("point", i)`` or ``("interval", i)`` for time *t*."""
        tol = self.tolerance
        if t < -tol or t > self.horizon + tol:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        i = bisect.bisect_left(self.breakpoints, t - tol)
        if i < len(self.breakpoints) and abs(self.breakpoints[i] - t) <= tol:
            return "point", i
        return "interval", i

    def value_at(self, t: float) -> T:
        kind, i = self.locate(t)
        return self.breakpoint_values[i] if kind == "point" else self.interval_values[i]

    def map(self, fn: Callable[[T], U]) -> Timeline[U]:
        return Timeline(
            horizon=self.horizon,
            breakpoints=self.breakpoints,
            interval_values=tuple(fn(v) for v in self.interval_values),
            breakpoint_values=tuple(fn(v) for v in self.breakpoint_values),
        )

    def window_values(self, lo: float, hi: float) -> list[T]:
        """Every value taken on ``[lo, hi]`` (closed window, clipped to the domain)."""
        tol = self.tolerance
        lo, hi = max(lo, 0.0), min(hi, self.horizon)
        edges = (0.0, *self.breakpoints, self.horizon)
        values: list[T] = []
        for i, value in enumerate(self.interval_values):
            a, b = edges[i], edges[i + 1]
            if a < hi - tol and b > lo + tol:
                values.append(value)
        for p, value in zip(self.breakpoints, self.breakpoint_values):
            if lo - tol <= p <= hi + tol:
                values.append(value)
        if not values:
            values.append(self.value_at(lo))
        # domain endpoints behave as points carrying the outer interval values
        if lo <= tol and self.interval_values[0] not in values:
            values.append(self.interval_values[0])
        if hi >= self.horizon - tol and self.interval_values[-1] not in values:
            values.append(self.interval_values[-1])
        return values

    def smooth(self, eps: float, combine: Callable[[Sequence[T]], T]) -> Timeline[T]:
        """Replace the value at every ``t`` by ``combine`` over ``[t - eps, t + eps]``.

        The window is clipped to ``[0, horizon]``. The result can only change
        at points ``b ± eps``, so it is rebuilt from those candidates and then
        compressed.
        """
        if eps < 0:
            raise ValueError(f"eps must be nonnegative, got {eps}")
        if eps == 0:
            return self
        tol = self.tolerance
        candidates: list[float] = []
        for b in self.breakpoints:
            for c in (b - eps, b + eps):
                if tol < c < self.horizon - tol:
                    candidates.append(c)
        candidates.sort()
        points: list[float] = []
        for c in candidates:
            if not points or c - points[-1] > tol:
                points.append(c)

        edges = (0.0, *points, self.horizon)
        interval_values = []
        for a, b in zip(edges, edges[1:]):
            mid = (a + b) / 2
            interval_values.append(combine(self.window_values(mid - eps, mid + eps)))
        breakpoint_values = [combine(self.window_values(p - eps, p + eps)) for p in points]
        return Timeline(
            horizon=self.horizon,
            breakpoints=tuple(points),
            interval_values=tuple(interval_values),
            breakpoint_values=tuple(breakpoint_values),
        ).compressed()

    def compressed(self) -> Timeline[T]:
        """Drop breakpoints where the left, point and right values agree."""
        breakpoints: list[float] = []
        interval_values: list[T] = [self.interval_values[0]]
        breakpoint_values: list[T] = []
        for i, b in enumerate(self.breakpoints):
            left, point, right = interval_values[-1], self.breakpoint_values[i], self.interval_values[i + 1]
            if left == point == right:
                continue
            breakpoints.append(b)
            breakpoint_values.append(point)
            interval_values.append(right)
        return Timeline(
            horizon=self.horizon,
            breakpoints=tuple(breakpoints),
            interval_values=tuple(interval_values),
            breakpoint_values=tuple(breakpoint_values),
        )
