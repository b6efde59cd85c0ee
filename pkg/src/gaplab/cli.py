"""Command-line driver.

Subcommands:

  simulate   empirical gap distribution from an exact lattice simulation
  closed     closed-form gap distribution (t > 2/3)
  general    general evaluator, any t > 0
  density    closed-form gap density (t > 2/3)
  atlas      build + validate the exact region atlas of a strip, as JSON
  compare    run engines side by side, emit a joined CSV and sup-norm summary

Curves are written as CSV (`lambda,G`, 12 significant digits) or JSON; every
file starts with a schema marker.  ``--plot`` drops a rendered figure next to
the delimited output.  GAPLAB_THREADS caps simulation workers.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from . import __version__
from .closed import ClosedFormUnavailable, density_closed, gap_closed
from .general import build_strip_atlas, gap_numeric, validate_atlas
from .io import CSV_SCHEMA, curve_csv_lines, write_gaps_binary
from .model import GapCurve, Scene, atlas_to_json, parse_rational
from .simulate import curve_from_gaps, enumerate_and_sort, gap_sequence, worker_count


def _parse_grid(text: str, t: Optional[Fraction]) -> list[float]:
    """Parse start:stop:step and snap in the kink points {1, 1/t, 2, 2/t}."""
    try:
        start_s, stop_s, step_s = text.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError as e:
        raise ValueError(f"grid must be start:stop:step, got {text!r}") from e
    if step <= 0 or stop < start or start < 0:
        raise ValueError(f"bad grid {text!r}: need step > 0 and stop >= start >= 0")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        values.append(v)
        k += 1
    if t is not None:
        tf = float(t)
        for snap in (1.0, 1.0 / tf, 2.0, 2.0 / tf):
            if start <= snap <= stop:
                values.append(snap)
    return sorted(set(values))


def _grid_from_args(args, t: Optional[Fraction]) -> list[float]:
    if args.lambdas:
        vals = sorted(float(x) for x in args.lambdas.split(","))
        if any(v < 0 for v in vals):
            raise ValueError("lambda values must be non-negative")
        return vals
    return _parse_grid(args.grid, t)


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _plot_path(args) -> Optional[str]:
    plot = getattr(args, "plot", None)
    if plot is None:
        return None
    if plot != "auto":
        return plot
    if args.output == "-":
        raise ValueError("--plot without a path requires --output FILE")
    stem = args.output.rsplit(".", 1)[0]
    return stem + ".png"


def _write_curve(args, curve: GapCurve, value_name: str, meta: list[str]) -> None:
    if not args.no_meta:
        meta = meta + [f"generated_at={_timestamp()}"]
    if args.format == "json":
        doc = {
            "schema": CSV_SCHEMA,
            "meta": meta,
            "lambda": [round(v, 15) for v in curve.lambdas],
            value_name: [round(v, 15) for v in curve.values],
        }
        _emit(json.dumps(doc, indent=1), args.output)
    else:
        _emit("\n".join(curve_csv_lines(curve, value_name, meta)), args.output)


def _cmd_simulate(args) -> int:
    t = parse_rational(args.t)
    scene = Scene(t=t, J=args.J)
    grid = _grid_from_args(args, t)
    seq = gap_sequence(enumerate_and_sort(scene, args.workers))
    curve = curve_from_gaps(seq, grid)
    meta = [f"engine=simulate t={t} J={args.J}",
            f"delta_av={seq.delta_av:.12g} alpha_max={seq.alpha_max:.12g}"]
    _write_curve(args, curve, "G", meta)
    if args.dump_gaps:
        write_gaps_binary(args.dump_gaps, seq.sorted_gaps)
    ppath = _plot_path(args)
    if ppath:
        from .plots import save_curves

        save_curves(ppath, [curve], [f"simulated J={args.J}"],
                    title=f"empirical gap distribution, t={t}, J={args.J}")
    return 0


def _cmd_closed(args) -> int:
    t = parse_rational(args.t)
    grid = _grid_from_args(args, t)
    try:
        curve = GapCurve(lambdas=grid, values=[gap_closed(t, lam) for lam in grid],
                         engine="closed")
    except ClosedFormUnavailable as e:
        print(f"error: {e} (use the `general` command)", file=sys.stderr)
        return 2
    _write_curve(args, curve, "G", [f"engine=closed t={t}"])
    ppath = _plot_path(args)
    if ppath:
        from .plots import save_curves

        save_curves(ppath, [curve], ["closed form"],
                    title=f"gap distribution, t={t}")
    return 0


def _cmd_general(args) -> int:
    t = parse_rational(args.t)
    grid = _grid_from_args(args, t)
    curve = GapCurve(lambdas=grid,
                     values=[gap_numeric(t, lam, tol=args.tol) for lam in grid],
                     engine="general")
    _write_curve(args, curve, "G", [f"engine=general t={t} tol={args.tol:g}"])
    ppath = _plot_path(args)
    if ppath:
        from .plots import save_curves

        save_curves(ppath, [curve], ["general evaluator"],
                    title=f"gap distribution, t={t}")
    return 0


def _cmd_density(args) -> int:
    t = parse_rational(args.t)
    grid = [v for v in _grid_from_args(args, t) if v > 0]
    try:
        curve = GapCurve(lambdas=grid, values=[density_closed(t, lam) for lam in grid],
                         engine="density")
    except ClosedFormUnavailable as e:
        print(f"error: {e} (use the `general` command)", file=sys.stderr)
        return 2
    _write_curve(args, curve, "g", [f"engine=density t={t}"])
    ppath = _plot_path(args)
    if ppath:
        from .plots import save_curves

        save_curves(ppath, [curve], ["density"], title=f"gap density, t={t}",
                    ylabel="g")
    return 0


def _cmd_atlas(args) -> int:
    atlas = build_strip_atlas(args.h)
    doc = atlas_to_json(atlas)
    report = validate_atlas(atlas) if not args.no_validate else None
    if not args.no_meta:
        doc["meta"] = {"generated_at": _timestamp(), "tool": f"gaplab {__version__}"}
    _emit(json.dumps(doc, indent=1, sort_keys=True), args.output)
    ppath = _plot_path(args)
    if ppath:
        from .plots import save_atlas

        save_atlas(ppath, atlas)
    if report is not None:
        print(report.summary(), file=sys.stderr)
        return 0 if report.ok else 1
    return 0


def _cmd_compare(args) -> int:
    t = parse_rational(args.t)
    scene = Scene(t=t, J=args.J)
    grid = _grid_from_args(args, t)

    timings = {}
    start = time.perf_counter()
    seq = gap_sequence(enumerate_and_sort(scene, args.workers))
    emp = curve_from_gaps(seq, grid).values
    timings["simulate"] = time.perf_counter() - start

    closed_vals = None
    if float(t) > 2 / 3:
        start = time.perf_counter()
        closed_vals = [gap_closed(t, lam) for lam in grid]
        timings["closed"] = time.perf_counter() - start

    start = time.perf_counter()
    general_vals = [gap_numeric(t, lam, tol=args.tol) for lam in grid]
    timings["general"] = time.perf_counter() - start

    sups = {}
    sups["emp_general"] = max(abs(a - b) for a, b in zip(emp, general_vals))
    if closed_vals is not None:
        sups["emp_closed"] = max(abs(a - b) for a, b in zip(emp, closed_vals))
        sups["closed_general"] = max(abs(a - b) for a, b in zip(closed_vals, general_vals))

    lines = [f"# schema={CSV_SCHEMA}", f"# engine=compare t={t} J={args.J}"]
    lines.append("# " + " ".join(f"sup_{k}={v:.6g}" for k, v in sorted(sups.items())))
    if not args.no_meta:
        lines.append("# " + " ".join(f"runtime_{k}_s={v:.3f}" for k, v in sorted(timings.items())))
        lines.append(f"# generated_at={_timestamp()}")
    lines.append("lambda,G_emp,G_closed,G_general,diff_max")
    for i, lam in enumerate(grid):
        cols = [emp[i], closed_vals[i] if closed_vals else float("nan"), general_vals[i]]
        have = [c for c in cols if c == c]
        diff = max(have) - min(have)
        c_str = f"{cols[1]:.12g}" if closed_vals else "nan"
        lines.append(f"{lam:.12g},{cols[0]:.12g},{c_str},{cols[2]:.12g},{diff:.12g}")
    _emit("\n".join(lines), args.output)

    ppath = _plot_path(args)
    if ppath:
        from .plots import save_compare

        save_compare(ppath, grid, {
            "empirical": emp,
            "closed": closed_vals,
            "general": general_vals,
        }, title=f"engine comparison, t={t}, J={args.J}")

    worst = max(sups.values())
    print("compare: " + " ".join(f"sup_{k}={v:.6g}" for k, v in sorted(sups.items())),
          file=sys.stderr)
    if args.fail_above is not None and worst > args.fail_above:
        print(f"compare: FAIL sup-norm {worst:.6g} > {args.fail_above}", file=sys.stderr)
        return 1
    return 0


def _add_common(p: argparse.ArgumentParser, with_grid: bool = True) -> None:
    p.add_argument("--output", "-o", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-meta", action="store_true",
                   help="omit timestamps/runtimes for byte-identical output")
    p.add_argument("--plot", nargs="?", const="auto", default=None, metavar="PNG",
                   help="also render a figure (default: next to --output)")
    if with_grid:
        p.add_argument("--grid", default="0:2:0.01", help="lambda grid start:stop:step")
        p.add_argument("--lambdas", default=None, help="explicit comma-separated grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaplab",
        description="gap distribution of angles to lattice points from a receding observer",
    )
    parser.add_argument("--version", action="version", version=f"gaplab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="exact lattice simulation")
    p.add_argument("--t", required=True, help="observer scale, 'p/q' or decimal")
    p.add_argument("--J", required=True, type=int, help="box half-width")
    p.add_argument("--workers", type=int, default=None,
                   help=f"row workers (default GAPLAB_THREADS={worker_count()})")
    p.add_argument("--dump-gaps", default=None, metavar="BIN",
                   help="also dump the sorted gap list (binary, little-endian f64)")
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("closed", help="closed forms, t > 2/3")
    p.add_argument("--t", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_closed)

    p = sub.add_parser("general", help="general evaluator, any t > 0")
    p.add_argument("--t", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=_cmd_general)

    p = sub.add_parser("density", help="closed-form density, t > 2/3")
    p.add_argument("--t", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("atlas", help="exact region atlas of a strip, as JSON")
    p.add_argument("--h", required=True, type=int, help="interference depth of the strip")
    p.add_argument("--no-validate", action="store_true")
    _add_common(p, with_grid=False)
    p.set_defaults(func=_cmd_atlas)

    p = sub.add_parser("compare", help="cross-validate engines on one scene")
    p.add_argument("--t", required=True)
    p.add_argument("--J", required=True, type=int)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--fail-above", type=float, default=None,
                   help="exit 1 when any sup-norm exceeds this")
    _add_common(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
