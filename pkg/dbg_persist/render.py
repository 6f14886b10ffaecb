"""Deterministic text, JSON and SVG renderings of command results.

Numbers always go through :func:`format_number` (text) or :func:`json_ready`
(JSON) so that repeated runs produce byte-identical output.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import TYPE_CHECKING, Any, Final, Iterable, Sequence

from matplotlib import rc_context
from matplotlib.figure import Figure

if TYPE_CHECKING:
    from .edge_strength import EdgeStrengthTable
    from .formigram import Event
    from .metrics import ComparisonReport, StabilityReport
    from .zigzag import Barcode

__all__ = [
    "format_number",
    "json_ready",
    "dumps_json",
    "render_strengths_text",
    "render_strengths_csv",
    "render_barcode_text",
    "render_events_text",
    "render_clusters_text",
    "render_comparison_text",
    "render_stability_text",
    "render_barcode_svg",
]

DIGITS: Final = 9
_BAR_COLOR: Final = "#1f4e79"
_SVG_HASH_SALT: Final = "dbgp"
_SVG_WIDTH: Final = 800


def format_number(value: float) -> str:
    """Fixed 9 fractional digits; ``inf``/``-inf`` for infinities."""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    rounded = round(value, DIGITS) + 0.0  # folds -0.0 into 0.0
    return f"{rounded:.{DIGITS}f}"


def json_ready(obj: Any) -> Any:
    """Recursively round floats to 9 digits and spell infinities as strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return round(obj, DIGITS) + 0.0
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    raise TypeError(f"cannot render {type(obj).__name__} as JSON")


def dumps_json(obj: Any) -> str:
    return json.dumps(json_ready(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Text
# ---------------------------------------------------------------------------


def render_strengths_text(table: EdgeStrengthTable) -> str:
    lines = [f"{k}\t{parent}\t{child}\t{format_number(value)}" for k, parent, child, value in table.rows()]
    return "\n".join(lines) + "\n" if lines else ""


def render_strengths_csv(table: EdgeStrengthTable) -> str:
    """Header-less CSV rows ``slice,parent,child,strength``."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    for k, parent, child, value in table.rows():
        writer.writerow([k, parent, child, format_number(value)])
    return buffer.getvalue()


def render_barcode_text(barcode: Barcode) -> str:
    lines = [bar.notation() for bar in barcode.bars]
    lines.append(f"{len(barcode.bars)} bar(s)")
    return "\n".join(lines) + "\n"


def _block_text(block: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(block)) + "}"


def render_events_text(events: Sequence[Event]) -> str:
    lines = [
        f"{format_number(e.time)}\t{e.kind}\t"
        f"{' + '.join(_block_text(b) for b in e.blocks_before)} -> "
        f"{' + '.join(_block_text(b) for b in e.blocks_after)}"
        for e in events
    ]
    return "\n".join(lines) + "\n" if lines else "no events\n"


def render_clusters_text(k: int, time: float, blocks: Sequence[Sequence[str]]) -> str:
    lines = [f"slice {k} at t={format_number(time)}: {len(blocks)} cluster(s)"]
    lines += [f"{index}\t{_block_text(block)}" for index, block in enumerate(blocks, start=1)]
    return "\n".join(lines) + "\n"


def render_comparison_text(report: ComparisonReport) -> str:
    lines = [
        f"bottleneck\t{format_number(report.bottleneck)}",
        f"interleaving_lower_bound\t{format_number(report.interleaving_lower_bound)}",
    ]
    for pair in report.matching:
        left = pair["a"] if pair["a"] is not None else "-"
        right = pair["b"] if pair["b"] is not None else "-"
        lines.append(f"match\t{left}\t{right}\t{format_number(pair['cost'])}")
    return "\n".join(lines) + "\n"


def render_stability_text(reports: Sequence[StabilityReport]) -> str:
    lines = ["eps\tlhs\tbound\tpass"]
    lines += [
        f"{format_number(r.eps)}\t{format_number(r.lhs)}\t{format_number(r.bound)}\t{'PASS' if r.passed else 'FAIL'}"
        for r in reports
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------


def render_barcode_svg(barcode: Barcode, horizon: float) -> str:
    """Draw one horizontal bar per interval over ``[0, horizon]``.

    Closed endpoints are filled circles, open endpoints hollow ones. The
    canvas is 800 pixels wide and ``40 + 20 * bars`` pixels tall.
    """
    bars = list(barcode.bars)
    height = 40 + 20 * len(bars)
    # the SVG backend maps one inch to 72 user units
    fig = Figure(figsize=(_SVG_WIDTH / 72, height / 72), dpi=72)
    ax = fig.add_subplot()
    # 20px below the axis for tick labels
    fig.subplots_adjust(left=0.05, right=0.95, bottom=20 / height, top=1 - 4 / height)
    for row, bar in enumerate(bars):
        y = len(bars) - row
        ax.hlines(y, bar.birth, bar.death, colors=_BAR_COLOR, linewidth=2)
        for x, closed in ((bar.birth, bar.birth_closed), (bar.death, bar.death_closed)):
            ax.plot(
                [x],
                [y],
                marker="o",
                markersize=5,
                markeredgecolor=_BAR_COLOR,
                markerfacecolor=_BAR_COLOR if closed else "white",
                zorder=3,
            )
    span = horizon if horizon > 0 else 1.0
    ax.set_xlim(-0.02 * span, 1.02 * span)
    ax.set_ylim(0.25, len(bars) + 0.75)
    ax.set_yticks([])
    for side in ("left", "right", "top"):
        ax.spines[side].set_visible(False)

    buffer = io.StringIO()
    with rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
