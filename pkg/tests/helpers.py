"""Small builders shared by the formigram and barcode tests."""

from dbg_persist.formigram import Formigram
from dbg_persist.timeline import Timeline


def partition(*blocks: str):
    """``partition("ab", "c")`` -> {{a, b}, {c}} (one character per element)."""
    return frozenset(frozenset(block) for block in blocks)


def formigram(horizon, times, intervals, criticals):
    """Build a formigram from block strings, see :func:`partition`."""
    ground = frozenset().union(*partition(*intervals[0]))
    return Formigram(
        ground_set=ground,
        partitions=Timeline(
            horizon=horizon,
            breakpoints=tuple(times),
            interval_values=tuple(partition(*p) for p in intervals),
            breakpoint_values=tuple(partition(*p) for p in criticals),
        ),
    )
