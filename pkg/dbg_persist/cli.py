"""Command-line interface for dbg-persist.

Reads a DBN document (JSON), thresholds its edge strengths into a dynamic
Bayesian graph and reports clusters, events, barcodes and distances. Output
goes to **stdout** (or ``--output PATH``, written atomically) and is
byte-identical across runs for identical inputs.

Exit codes:
    0: Success (stability: every check passed)
    1: Domain error (invalid document, failed stability check, oracle refusal)
    2: I/O or usage error
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__ as _VERSION
from . import config, render, store
from .dbn_model import Dbn, DbnFormatError, DbnValidationError, dump_dbn, load_dbn, parse_dbn
from .dynamic_graph import DynamicBayesianGraph, build_dbg
from .edge_strength import Divergence, strength_table
from .formigram import clusters_at_slice, detect_events, formigram_of, smooth_formigram
from .metrics import compare_barcodes, stability_check
from .oracle_zz import oracle_barcode
from .sampling import random_dbn
from .zigzag import Barcode, zigzag_barcode

_FORMATS = ("json", "text", "svg", "csv")


def _extended_real(value: str) -> float:
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if math.isnan(number):
        raise argparse.ArgumentTypeError("NaN is not allowed")
    return number


def _nonnegative(value: str) -> float:
    number = _extended_real(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return number


def _eps_list(value: str) -> list[float]:
    return [_nonnegative(item) for item in value.split(",") if item.strip()]


def _build_parser() -> argparse.ArgumentParser:
    """Build the command-line argument parser.

    Returns:
        argparse.ArgumentParser: Configured argument parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--divergence",
        choices=[d.value for d in Divergence],
        default=None,
        help="Row divergence for edge strengths (default: $DBG_PERSIST_DIVERGENCE or tv)",
    )
    common.add_argument("--eta", type=_extended_real, default=None, help="Edge threshold; strengths must exceed it")
    common.add_argument("--eps", type=_nonnegative, default=0.0, help="Smoothing radius applied to the formigram")
    common.add_argument("--format", choices=_FORMATS, default=None, help="Output format (default: json)")
    common.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=0, help="Seed for randomized commands")
    common.add_argument("--output", "-o", type=Path, default=None, help="Write output to PATH instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true", help="Mirror debug logging to stderr")

    p = argparse.ArgumentParser(
        prog="dbgp",
        description="Persistent clustering of dynamic Bayesian networks",
    )
    p.add_argument("--version", action="version", version=f"dbgp {_VERSION}")
    sub = p.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", parents=[common], help="Check a DBN document")
    validate.add_argument("path", type=Path)

    strengths = sub.add_parser("strengths", parents=[common], help="Edge strength table")
    strengths.add_argument("path", type=Path)

    barcode = sub.add_parser("barcode", parents=[common], help="H0 zigzag barcode")
    barcode.add_argument("path", type=Path)

    events = sub.add_parser("events", parents=[common], help="Merge and disband events")
    events.add_argument("path", type=Path)

    clusters = sub.add_parser("clusters", parents=[common], help="Cluster families of one slice")
    clusters.add_argument("path", type=Path)
    clusters.add_argument("--slice", dest="slice", type=int, required=True, help="Slice index k")

    compare = sub.add_parser("compare", parents=[common], help="Bottleneck comparison of two networks")
    compare.add_argument("path", type=Path)
    compare.add_argument("path_b", type=Path)
    compare.add_argument("--eta-b", type=_extended_real, default=None, help="Threshold for the second network")

    stability = sub.add_parser("stability", parents=[common], help="Check the smoothing bound")
    stability.add_argument("path", type=Path)
    stability.add_argument(
        "--eps-list",
        type=_eps_list,
        default=None,
        help="Comma-separated radii (default: 0, dt/2, dt, 2dt)",
    )

    sample = sub.add_parser("sample", parents=[common], help="Print a random DBN document")
    sample.add_argument("--variables", type=int, default=4)
    sample.add_argument("--slices", type=int, default=3)
    return p


# ---------------------------------------------------------------------------
# Pipeline helpers
# ---------------------------------------------------------------------------


def _divergence(args: argparse.Namespace, cfg: config.Config, parser: argparse.ArgumentParser) -> Divergence:
    try:
        return Divergence.parse(args.divergence or cfg.divergence)
    except ValueError as exc:
        parser.error(str(exc))


def _require_eta(args: argparse.Namespace, parser: argparse.ArgumentParser) -> float:
    if args.eta is None:
        parser.error(f"--eta is required for '{args.command}'")
    return args.eta


def _graph(dbn: Dbn, kind: Divergence, eta: float) -> DynamicBayesianGraph:
    return build_dbg(strength_table(dbn, kind), eta)


def _barcode(dbg: DynamicBayesianGraph, eps: float, use_oracle: bool) -> Barcode:
    fg = formigram_of(dbg)
    if eps:
        fg = smooth_formigram(fg, eps)
    return oracle_barcode(fg) if use_oracle else zigzag_barcode(fg)


def _check_format(fmt: str, allowed: tuple[str, ...], parser: argparse.ArgumentParser, command: str) -> None:
    if fmt not in allowed:
        parser.error(f"format '{fmt}' is not available for '{command}' (choose from {', '.join(allowed)})")


# ---------------------------------------------------------------------------
# Commands; each returns (output text, exit code)
# ---------------------------------------------------------------------------


def cmd_validate(args, fmt: str) -> tuple[str, int]:
    text = args.path.read_text(encoding="utf-8")
    try:
        parse_dbn(text)
        violations: list[str] = []
    except DbnValidationError as exc:
        violations = exc.violations
    except DbnFormatError as exc:
        violations = [str(exc)]
    if fmt == "json":
        return render.dumps_json({"valid": not violations, "violations": violations}), 1 if violations else 0
    if not violations:
        return "OK\n", 0
    return "".join(f"{v}\n" for v in violations), 1


def cmd_strengths(args, fmt: str, kind: Divergence) -> tuple[str | None, int]:
    table = strength_table(load_dbn(args.path), kind)
    if fmt == "csv":
        if args.output is not None:
            store.write_strength_csv(args.output, table)
            return None, 0
        return render.render_strengths_csv(table), 0
    if fmt == "text":
        return render.render_strengths_text(table), 0
    return render.dumps_json(table.to_records()), 0


def cmd_barcode(args, fmt: str, kind: Divergence, eta: float) -> tuple[str, int]:
    dbg = _graph(load_dbn(args.path), kind, eta)
    barcode = _barcode(dbg, args.eps, args.oracle)
    if fmt == "svg":
        return render.render_barcode_svg(barcode, dbg.horizon), 0
    if fmt == "text":
        return render.render_barcode_text(barcode), 0
    return render.dumps_json(barcode.to_records()), 0


def cmd_events(args, fmt: str, kind: Divergence, eta: float) -> tuple[str, int]:
    dbg = _graph(load_dbn(args.path), kind, eta)
    fg = formigram_of(dbg)
    if args.eps:
        fg = smooth_formigram(fg, args.eps)
    events = detect_events(fg)
    if fmt == "text":
        return render.render_events_text(events), 0
    return render.dumps_json([e.to_dict() for e in events]), 0


def cmd_clusters(args, fmt: str, kind: Divergence, eta: float) -> tuple[str, int]:
    dbg = _graph(load_dbn(args.path), kind, eta)
    t_star, blocks = clusters_at_slice(dbg, args.slice)
    if fmt == "text":
        return render.render_clusters_text(args.slice, t_star, blocks), 0
    payload = {
        "slice": args.slice,
        "time": t_star,
        "clusters": [{"index": i, "members": block} for i, block in enumerate(blocks, start=1)],
    }
    return render.dumps_json(payload), 0


def cmd_compare(args, fmt: str, kind: Divergence, eta: float) -> tuple[str, int]:
    eta_b = eta if args.eta_b is None else args.eta_b
    a = _barcode(_graph(load_dbn(args.path), kind, eta), args.eps, args.oracle)
    b = _barcode(_graph(load_dbn(args.path_b), kind, eta_b), args.eps, args.oracle)
    report = compare_barcodes(a, b)
    if fmt == "text":
        return render.render_comparison_text(report), 0
    return render.dumps_json(report.to_dict()), 0


def cmd_stability(args, fmt: str, kind: Divergence, eta: float) -> tuple[str, int]:
    dbn = load_dbn(args.path)
    dbg = _graph(dbn, kind, eta)
    dt = dbn.delta_t
    eps_list = args.eps_list if args.eps_list is not None else [0.0, dt / 2, dt, 2 * dt]
    reports = [stability_check(dbg, eps) for eps in eps_list]
    code = 0 if all(r.passed for r in reports) else 1
    if fmt == "text":
        return render.render_stability_text(reports), code
    payload = {"checks": [r.to_dict() for r in reports], "pass": code == 0}
    return render.dumps_json(payload), code


def cmd_sample(args) -> tuple[str, int]:
    if args.variables < 1 or args.slices < 1:
        raise ValueError("--variables and --slices must be positive")
    dbn = random_dbn(np.random.default_rng(args.seed), args.variables, args.slices)
    return dump_dbn(dbn), 0


def _run(args, parser, cfg) -> tuple[str | None, int]:
    command = args.command
    if command == "validate":
        fmt = args.format or "text"
        _check_format(fmt, ("json", "text"), parser, command)
        return cmd_validate(args, fmt)
    if command == "sample":
        _check_format(args.format or "json", ("json",), parser, command)
        return cmd_sample(args)

    kind = _divergence(args, cfg, parser)
    fmt = args.format or "json"
    if command == "strengths":
        _check_format(fmt, ("json", "text", "csv"), parser, command)
        return cmd_strengths(args, fmt, kind)

    allowed: dict[str, tuple[tuple[str, ...], Callable]] = {
        "barcode": (("json", "text", "svg"), cmd_barcode),
        "events": (("json", "text"), cmd_events),
        "clusters": (("json", "text"), cmd_clusters),
        "compare": (("json", "text"), cmd_compare),
        "stability": (("json", "text"), cmd_stability),
    }
    formats, handler = allowed[command]
    _check_format(fmt, formats, parser, command)
    return handler(args, fmt, kind, _require_eta(args, parser))


def main(argv: list[str] | None = None) -> None:  # noqa: D401
    """Program entry point.

    Args:
        argv: Command-line arguments (defaults to sys.argv[1:])
    """
    argv = argv if argv is not None else sys.argv[1:]
    parser = _build_parser()

    # Ensure logging configured early
    logger = config.get_logger(__name__)
    args = parser.parse_args(argv)
    if args.verbose:
        config.enable_stderr_logging()
    cfg = config.load_config()

    try:
        output, code = _run(args, parser, cfg)
        if output is None:
            pass  # already written by the command
        elif args.output is not None:
            store.write_text_atomic(args.output, output)
        else:
            sys.stdout.write(output)
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        print(f"ERROR: {exc}", file=sys.stderr)
        sys.exit(2)
    except ValueError as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"ERROR: {exc}", file=sys.stderr)
        sys.exit(1)

    logger.info("%s finished with exit code %d", args.command, code)
    sys.exit(code)


if __name__ == "__main__":
    main()
