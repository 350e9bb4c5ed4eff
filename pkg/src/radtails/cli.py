"""Command-line interface.

Thresholds are always given by their exact rational square (``--x2 P/Q``),
never as decimals, so every computation downstream stays exact.  Each
command writes a single JSON document to stdout (JSON lines precede it for
``scan --progress`` and ``search``); ``series`` and ``plot`` can emit CSV
instead.  Exit codes: 0 success / verdict computed, 1 usage error,
2 UNDECIDED verdict, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from .exactnum import QRoot
from .gaussian import DEFAULT_WIDTH, NoFiniteThresholdError, be_threshold, normal_tail_bounds
from .scan import scan_max_equal
from .search import default_x_grid, heuristic_search, load_search_config, series_quadruple
from .tails import TwoAtom, tail_equal, tail_two_atom
from .verify import (
    Verdict,
    check_less,
    interval_dict,
    rat_str,
    report_dict,
    report_text,
    scan_dict,
    verify_counterexample,
)

DEFAULT_MAX_SCAN_J = 100_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _parse_rat(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed rational {text!r}: {exc}") from exc
    return value


def _threshold_qroot(square: Fraction, sign: int) -> QRoot:
    if square < 0:
        raise UsageError("a squared threshold cannot be negative")
    if square == 0:
        return QRoot(0, Fraction(0))
    if sign == 0:
        raise UsageError("sign 0 requires x2 = 0")
    return QRoot(sign, square)


def _emit(doc: dict, *, stream=None) -> None:
    doc = dict(doc)
    doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    print(json.dumps(doc, sort_keys=True), file=stream or sys.stdout)


def _emit_csv(rows: list[dict], fields: list[str]) -> None:
    writer = csv.DictWriter(sys.stdout, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in fields})


def _config_defaults(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    try:
        return load_search_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config_int(cfg: dict[str, str], key: str, fallback: int) -> int:
    if key not in cfg:
        return fallback
    try:
        return int(cfg[key])
    except ValueError as exc:
        raise UsageError(f"config key {key} must be an integer, got {cfg[key]!r}") from exc


# ---------------------------------------------------------------------------
# subcommands


def _cmd_tail(args: argparse.Namespace) -> int:
    x = _threshold_qroot(_parse_rat(args.x2), args.x_sign)
    if args.kind == "equal":
        value = tail_equal(args.n, x).exact
        doc = {"command": "tail-equal", "n": args.n, "x": {"sign": x.sign, "square": rat_str(x.square)}}
    else:
        t2 = _parse_rat(args.t2)
        if not 0 < t2 < 1:
            raise UsageError("t2 must lie strictly between 0 and 1")
        vector = TwoAtom(args.n, QRoot(1, t2))
        value = tail_two_atom(vector, x).exact
        doc = {
            "command": "tail-two-atom",
            "n": args.n,
            "t2": rat_str(t2),
            "x": {"sign": x.sign, "square": rat_str(x.square)},
        }
    doc["tail"] = rat_str(value)
    doc["tail_approx"] = float(value)
    _emit(doc)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config_defaults(args.config)
    if (args.x2 is None) != (args.t2 is None):
        raise UsageError("--x2 and --t2 must be given together")
    if args.x2 is None:
        try:
            quad = series_quadruple(args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        x, t = quad.x, quad.t
    else:
        x = _threshold_qroot(_parse_rat(args.x2), 1)
        t2 = _parse_rat(args.t2)
        if not 0 < t2 < 1:
            raise UsageError("t2 must lie strictly between 0 and 1")
        t = QRoot(1, t2)
    jobs = args.jobs if args.jobs is not None else _config_int(cfg, "jobs", os.cpu_count() or 1)
    report = verify_counterexample(
        args.n,
        x,
        t,
        max_scan_j=args.max_scan_j,
        jobs=jobs,
        progress=(lambda ev: _emit({"event": "progress", **ev})) if args.progress else None,
    )
    if args.format == "text":
        print(report_text(report))
    else:
        _emit({"command": "verify", **report_dict(report)})
    return 2 if report.verdict is Verdict.UNDECIDED else 0


def _cmd_series(args: argparse.Namespace) -> int:
    if args.start < 8:
        raise UsageError("the series starts at n = 8")
    if args.end < args.start:
        raise UsageError("--to must be at least --from")
    rows = []
    for n in range(args.start, args.end + 1):
        quad = series_quadruple(n)
        result = check_less(n)
        rows.append(
            {
                "n": n,
                "x2": rat_str(quad.x.square),
                "t2": rat_str(quad.t.square),
                "tail_value": rat_str(result.series_value),
                "tail_value_approx": float(result.series_value),
                "vs_normal_tail": result.status.value,
            }
        )
    if args.format == "csv":
        _emit_csv(rows, ["n", "x2", "t2", "tail_value", "tail_value_approx", "vs_normal_tail"])
    else:
        _emit({"command": "series", "rows": rows})
    return 0


def _cmd_threshold(args: argparse.Namespace) -> int:
    x = _threshold_qroot(_parse_rat(args.x2), 1)
    p_target = _parse_rat(args.p_target)
    if not 0 < p_target <= 1:
        raise UsageError("p-target must lie in (0, 1]")
    phi = normal_tail_bounds(x, DEFAULT_WIDTH)
    doc = {
        "command": "threshold",
        "x2": rat_str(x.square),
        "p_target": rat_str(p_target),
        "normal_tail": interval_dict(phi.bounds),
    }
    try:
        doc["threshold"] = be_threshold(x, p_target)
    except NoFiniteThresholdError as exc:
        doc["threshold"] = None
        doc["reason"] = str(exc)
    _emit(doc)
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    cfg = _config_defaults(args.config)
    x = _threshold_qroot(_parse_rat(args.x2), args.x_sign)
    p_ref = None if args.p_ref is None else _parse_rat(args.p_ref)
    jobs = args.jobs if args.jobs is not None else _config_int(cfg, "jobs", os.cpu_count() or 1)
    progress = (lambda ev: _emit({"event": "progress", **ev})) if args.progress else None
    result = scan_max_equal(x, args.max_j, p_ref, jobs=jobs, progress=progress)
    _emit({"command": "scan", **scan_dict(result)})
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    cfg = _config_defaults(args.config)
    grid_cap = args.grid_cap if args.grid_cap is not None else _config_int(cfg, "grid_cap", 8)
    n_max = args.n_max if args.n_max is not None else _config_int(cfg, "n_max", 10)
    scan_j = args.scan_j if args.scan_j is not None else _config_int(cfg, "scan_j", 2000)
    jobs = args.jobs if args.jobs is not None else _config_int(cfg, "jobs", 1)
    counters: dict = {}
    reports = heuristic_search(
        default_x_grid(grid_cap), n_max, scan_j, jobs=jobs, counters=counters
    )
    for rep in reports:
        record = {
            "record": "candidate",
            "x2": rat_str(rep.quadruple.x.square),
            "n": rep.quadruple.n,
            "k": rep.quadruple.k,
            "t_exact": rep.quadruple.t_is_exact,
            "t2": None if rep.quadruple.t is None else rat_str(rep.quadruple.t.square),
            "p_candidate": rat_str(rep.p_candidate),
            "scan_max": rat_str(rep.scan_result.max_value),
            "scan_argmax_j": rep.scan_result.argmax_j,
            "margin": rat_str(rep.margin),
            "margin_positive": rep.margin > 0,
        }
        print(json.dumps(record, sort_keys=True))
    _emit(
        {
            "command": "search",
            "grid_cap": grid_cap,
            "n_max": n_max,
            "scan_j": scan_j,
            "cells": counters.get("cells", 0),
            "skipped": counters.get("skipped", 0),
            "evaluated": counters.get("evaluated", 0),
            "positive_margin": sum(1 for r in reports if r.margin > 0),
        }
    )
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    if args.points < 1:
        raise UsageError("--points must be positive")
    n = args.n
    rows = []
    for r in range(args.points + 1):
        square = Fraction(n * r * r, args.points * args.points)
        x = QRoot(0 if square == 0 else 1, square)
        value = tail_equal(n, x).exact
        rows.append(
            {
                "x2": rat_str(square),
                "x_approx": x.approx(),
                "tail": rat_str(value),
                "tail_approx": float(value),
            }
        )
    if args.format == "csv":
        _emit_csv(rows, ["x2", "x_approx", "tail", "tail_approx"])
    else:
        _emit({"command": "plot-equal-tail", "n": n, "rows": rows})
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="radtails", description=__doc__)
    parser.add_argument("--config", help="plain-text key = value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tail = sub.add_parser("tail", help="exact tail probability of one vector")
    tail_sub = p_tail.add_subparsers(dest="kind", required=True)
    for kind in ("equal", "two-atom"):
        p = tail_sub.add_parser(kind)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--x2", required=True, help="threshold squared, as P/Q")
        p.add_argument("--x-sign", type=int, choices=(-1, 0, 1), default=1)
        if kind == "two-atom":
            p.add_argument("--t2", required=True, help="extra coordinate squared, as P/Q")
        p.set_defaults(func=_cmd_tail, kind=kind)

    p_verify = sub.add_parser("verify", help="full counterexample certificate")
    p_verify.add_argument("--n", type=int, required=True)
    p_verify.add_argument("--x2", help="threshold squared (default: series member)")
    p_verify.add_argument("--t2", help="extra coordinate squared (default: series member)")
    p_verify.add_argument("--max-scan-j", type=int, default=DEFAULT_MAX_SCAN_J,
                          help="scan budget; larger thresholds return UNDECIDED")
    p_verify.add_argument("--jobs", type=int, default=None)
    p_verify.add_argument("--progress", action="store_true")
    p_verify.add_argument("--format", choices=("json", "text"), default="json")
    p_verify.set_defaults(func=_cmd_verify)

    p_series = sub.add_parser("series", help="the counterexample series members")
    p_series.add_argument("--from", dest="start", type=int, default=8)
    p_series.add_argument("--to", dest="end", type=int, default=24)
    p_series.add_argument("--format", choices=("json", "csv"), default="json")
    p_series.set_defaults(func=_cmd_series)

    p_thresh = sub.add_parser("threshold", help="smallest J disposed of by the normal bound")
    p_thresh.add_argument("--x2", required=True)
    p_thresh.add_argument("--p-target", required=True)
    p_thresh.set_defaults(func=_cmd_threshold)

    p_scan = sub.add_parser("scan", help="exact equal-weight tail maximum over 1..J")
    p_scan.add_argument("--x2", required=True)
    p_scan.add_argument("--x-sign", type=int, choices=(-1, 0, 1), default=1)
    p_scan.add_argument("--max-j", type=int, required=True)
    p_scan.add_argument("--p-ref", default=None)
    p_scan.add_argument("--jobs", type=int, default=None)
    p_scan.add_argument("--progress", action="store_true")
    p_scan.set_defaults(func=_cmd_scan)

    p_search = sub.add_parser("search", help="grid search for positive-margin candidates")
    p_search.add_argument("--grid-cap", type=int, default=None)
    p_search.add_argument("--n-max", type=int, default=None)
    p_search.add_argument("--scan-j", type=int, default=None)
    p_search.add_argument("--jobs", type=int, default=None)
    p_search.set_defaults(func=_cmd_search)

    p_plot = sub.add_parser("plot", help="tail function samples for plotting")
    plot_sub = p_plot.add_subparsers(dest="what", required=True)
    p_pe = plot_sub.add_parser("equal-tail")
    p_pe.add_argument("--n", type=int, required=True)
    p_pe.add_argument("--points", type=int, required=True)
    p_pe.add_argument("--format", choices=("json", "csv"), default="json")
    p_pe.set_defaults(func=_cmd_plot)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - map anything else to code 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
