"""Command-line front end.

Subcommands mirror fminbnd's (f, x1, x2) call: an expression plus
``--lo``/``--hi`` bounds. Text output uses 6 significant digits; ``--json``
emits a ``RunReport`` with full-precision numbers.

Exit codes: 0 success, 1 usage or parse error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
import warnings
from collections.abc import Callable
from dataclasses import asdict, replace
from pathlib import Path

from scalaropt import __version__
from scalaropt.config import Config
from scalaropt.critical import absolute_extrema, find_critical_points, monotonic_intervals
from scalaropt.errors import DomainFault, InvalidInput, ParseError, ScalarOptWarning, SolverError
from scalaropt.function import ExprFunction, ScalarFunction
from scalaropt.models import (
    PIPE_DOMAIN,
    CinemaModel,
    PipeModel,
    cinema_best_distance,
    cinema_closed_form,
    cinema_curve,
    pipe_closed_form,
    pipe_curve,
    pipe_max_length,
)
from scalaropt.optimize import (
    Interval,
    Method,
    SolveOptions,
    bracket_minimum,
    maximize_bounded,
    minimize_bounded,
)
from scalaropt.plot import Marker, PlotSeries, emit_csv, emit_png, emit_svg, sample
from scalaropt.report import (
    RunReport,
    critical_payload,
    elapsed_ms,
    extremum_payload,
    segment_payload,
    solve_payload,
)
from scalaropt.settings import load_settings, reset_settings, save_settings, set_setting

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2

PLOT_FORMATS = ("csv", "svg", "png")

Handler = Callable[[argparse.Namespace, Config], tuple[RunReport, str]]


class UsageError(InvalidInput):
    """Bad command-line usage."""


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; route it to exit 1 instead."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


# ------------------------------------------------------------------
# Shared helpers
# ------------------------------------------------------------------


def _angle_in(args: argparse.Namespace) -> Callable[[float], float]:
    return math.radians if getattr(args, "degrees", False) else float


def _angle_out(args: argparse.Namespace) -> Callable[[float], float]:
    return math.degrees if getattr(args, "degrees", False) else float


def _solve_options(args: argparse.Namespace) -> SolveOptions:
    return SolveOptions(
        x_tolerance=args.tol,
        max_iterations=args.max_iter,
        method=args.method,
        endpoint_margin=args.margin,
    )


def _interval(args: argparse.Namespace) -> Interval:
    if args.lo is None or args.hi is None:
        raise UsageError("--lo and --hi are required")
    to_rad = _angle_in(args)
    return Interval(to_rad(args.lo), to_rad(args.hi))


def _solve_interval(args: argparse.Namespace, objective: ScalarFunction) -> Interval:
    """Interval from --lo/--hi, or bracketed downhill from --x0."""
    if args.x0 is None:
        return _interval(args)
    if args.lo is not None or args.hi is not None:
        raise UsageError("give either --x0 or --lo/--hi, not both")
    to_rad = _angle_in(args)
    a, _, c = bracket_minimum(objective, to_rad(args.x0), to_rad(args.step))
    return Interval(a, c)


def _plot_format(path: Path | None, explicit: str | None) -> str:
    if explicit:
        return explicit
    if path is not None and path.suffix.lstrip(".").lower() in PLOT_FORMATS:
        return path.suffix.lstrip(".").lower()
    if path is not None:
        raise UsageError(f"cannot tell plot format from {path.name!r}; pass --format")
    return "csv"


def _render(series: PlotSeries, fmt: str, config: Config, markers: list[Marker]) -> str | bytes:
    if fmt == "svg":
        return emit_svg(series, config.plot_width, config.plot_height, markers)
    if fmt == "png":
        return emit_png(series, config.plot_width, config.plot_height, markers)
    return emit_csv(series)


def _write(path: Path, content: str | bytes) -> None:
    if isinstance(content, bytes):
        path.write_bytes(content)
    else:
        # newline="" keeps LF endings on every platform
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(content)
    log.info("Wrote %s", path)


def _in_units(series: PlotSeries, x_out: Callable[[float], float]) -> PlotSeries:
    return PlotSeries(tuple(x_out(x) for x in series.xs), series.ys, series.label)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


# ------------------------------------------------------------------
# Commands
# ------------------------------------------------------------------


def _cmd_solve(args: argparse.Namespace, config: Config, *, maximize: bool) -> tuple[RunReport, str]:
    f = ExprFunction.from_text(args.expression)
    opts = _solve_options(args)
    iv = _solve_interval(args, -f if maximize else f)
    result = (maximize_bounded if maximize else minimize_bounded)(f, iv, opts)

    x_out = _angle_out(args)
    inputs = {
        "expression": args.expression,
        "lo": x_out(iv.lo),
        "hi": x_out(iv.hi),
        "tol": opts.x_tolerance,
        "max_iter": opts.max_iterations,
        "method": opts.method.value,
        "degrees": bool(args.degrees),
    }
    status = "converged" if result.converged else "NOT converged"
    text = (
        f"x = {_fmt(x_out(result.x_min))}, f(x) = {_fmt(result.f_min)} "
        f"({opts.method.value}, {result.iterations} iterations, "
        f"{result.function_evaluations} evaluations, {status})"
    )
    command = "maximize" if maximize else "minimize"
    return RunReport(command, inputs, solve_payload(result, x_out)), text


def _cmd_minimize(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    return _cmd_solve(args, config, maximize=False)


def _cmd_maximize(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    return _cmd_solve(args, config, maximize=True)


def _grid_inputs(args: argparse.Namespace, iv: Interval) -> dict:
    x_out = _angle_out(args)
    return {
        "expression": args.expression,
        "lo": x_out(iv.lo),
        "hi": x_out(iv.hi),
        "grid": args.grid,
        "degrees": bool(args.degrees),
    }


def _cmd_critical(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    f = ExprFunction.from_text(args.expression)
    iv = _interval(args)
    opts = replace(config.critical_options(), grid_points=args.grid)
    points = find_critical_points(f, iv, opts)

    x_out = _angle_out(args)
    lines = [
        f"x = {_fmt(x_out(p.x))}, f = {_fmt(p.f_value)}: {p.kind.value} ({p.test_used.value} test)"
        for p in points
    ] or ["no critical points"]
    payload = [critical_payload(p, x_out) for p in points]
    return RunReport("critical-points", _grid_inputs(args, iv), payload), "\n".join(lines)


def _cmd_monotonic(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    f = ExprFunction.from_text(args.expression)
    iv = _interval(args)
    opts = replace(config.critical_options(), grid_points=args.grid)
    segments = monotonic_intervals(f, iv, opts)

    x_out = _angle_out(args)
    lines = [
        f"[{_fmt(x_out(s.interval.lo))}, {_fmt(x_out(s.interval.hi))}] "
        f"{s.direction.value if s.direction else 'unlabeled'}"
        for s in segments
    ]
    payload = [segment_payload(s, x_out) for s in segments]
    return RunReport("monotonic", _grid_inputs(args, iv), payload), "\n".join(lines)


def _cmd_extrema(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    f = ExprFunction.from_text(args.expression)
    iv = _interval(args)
    opts = replace(config.critical_options(), grid_points=args.grid)
    lowest, highest = absolute_extrema(f, iv, opts)

    x_out = _angle_out(args)
    text = "\n".join(
        f"{name}: f = {_fmt(e.f_value)} at x = {_fmt(x_out(e.x))} ({e.where})"
        for name, e in (("min", lowest), ("max", highest))
    )
    payload = {"min": extremum_payload(lowest, x_out), "max": extremum_payload(highest, x_out)}
    return RunReport("extrema", _grid_inputs(args, iv), payload), text


def _model_plot(
    args: argparse.Namespace, config: Config, f: ScalarFunction, iv: Interval, marker: Marker
) -> dict | None:
    if args.plot is None:
        return None
    path = Path(args.plot)
    fmt = _plot_format(path, None)
    series = sample(f, iv, config.samples)
    _write(path, _render(series, fmt, config, [marker]))
    return {"path": str(path), "format": fmt, "samples": len(series.xs), "gaps": len(series.gaps)}


def _cmd_model_pipe(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    m = PipeModel(args.a, args.b)
    alpha, length = pipe_max_length(m, _solve_options(args))
    alpha_cf, length_cf = pipe_closed_form(m)

    payload = {
        "alpha": alpha,
        "alpha_deg": math.degrees(alpha),
        "length": length,
        "closed_form": {"alpha": alpha_cf, "length": length_cf},
    }
    plotted = _model_plot(
        args, config, pipe_curve(m), PIPE_DOMAIN.shrink(0.03), (alpha, length, f"L* = {_fmt(length)}")
    )
    if plotted:
        payload["plot"] = plotted
    text = f"alpha* = {alpha:.6f} rad ({math.degrees(alpha):.3f} deg), L* = {length:.6f}"
    inputs = {"a": m.width_a, "b": m.width_b, "tol": args.tol, "method": args.method}
    return RunReport("model pipe", inputs, payload), text


def _cmd_model_cinema(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    m = CinemaModel(args.top, args.bottom)
    lo = config.cinema_search_lo if args.lo is None else args.lo
    hi = config.cinema_search_hi if args.hi is None else args.hi
    search = Interval(lo, hi)
    x_star, theta = cinema_best_distance(m, search, _solve_options(args))
    x_cf, theta_cf = cinema_closed_form(m)

    payload = {
        "x": x_star,
        "theta": theta,
        "theta_deg": math.degrees(theta),
        "closed_form": {"x": x_cf, "theta": theta_cf},
    }
    plotted = _model_plot(
        args, config, cinema_curve(m), search, (x_star, theta, f"theta* = {_fmt(theta)}")
    )
    if plotted:
        payload["plot"] = plotted
    text = f"x* = {x_star:.6f}, theta* = {theta:.6f} rad ({math.degrees(theta):.3f} deg)"
    inputs = {"top": m.top, "bottom": m.bottom, "lo": lo, "hi": hi, "tol": args.tol, "method": args.method}
    return RunReport("model cinema", inputs, payload), text


def _cmd_plot(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    f = ExprFunction.from_text(args.expression)
    iv = _interval(args)
    out = Path(args.out) if args.out else None
    fmt = _plot_format(out, args.format)
    if fmt == "png" and out is None:
        raise UsageError("png output needs --out")

    x_out = _angle_out(args)
    series = sample(f, iv, args.samples)
    markers: list[Marker] = []
    if args.mark_min:
        result = minimize_bounded(f, iv, config.solve_options())
        markers.append((x_out(result.x_min), result.f_min, f"min {_fmt(result.f_min)}"))
    content = _render(_in_units(series, x_out), fmt, config, markers)

    inputs = {
        "expression": args.expression,
        "lo": x_out(iv.lo),
        "hi": x_out(iv.hi),
        "samples": args.samples,
        "format": fmt,
        "degrees": bool(args.degrees),
    }
    payload: dict = {"samples": len(series.xs), "gaps": len(series.gaps)}
    if out is None:
        payload[fmt] = content
        return RunReport("plot", inputs, payload), str(content)
    _write(out, content)
    payload["path"] = str(out)
    text = f"wrote {out} ({len(series.xs)} samples, {len(series.gaps)} gaps)"
    return RunReport("plot", inputs, payload), text


def _cmd_settings(args: argparse.Namespace, config: Config) -> tuple[RunReport, str]:
    if args.reset:
        reset_settings()
        config = Config()
    if args.set:
        for assignment in args.set:
            set_setting(config, assignment)
        # reject values the option objects would refuse before persisting them
        config.solve_options()
        config.critical_options()
        save_settings(config)
    current = asdict(config)
    return RunReport("settings", {"set": args.set or [], "reset": args.reset}, current), json.dumps(
        current, indent=2
    )


# ------------------------------------------------------------------
# Parser
# ------------------------------------------------------------------


def build_parser(config: Config) -> argparse.ArgumentParser:
    """Argument parser whose defaults come from ``config`` (and thus settings)."""
    output = _ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true", help="emit a JSON run report")
    output.add_argument(
        "--no-timing", action="store_true", help="report elapsed_ms as 0 for reproducible output"
    )
    output.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")

    bounds = _ArgumentParser(add_help=False)
    bounds.add_argument("--lo", type=float, help="lower bound")
    bounds.add_argument("--hi", type=float, help="upper bound")
    bounds.add_argument("--degrees", action="store_true", help="bounds and reported x in degrees")

    solver = _ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=config.x_tolerance, help="x tolerance")
    solver.add_argument("--max-iter", type=int, default=config.max_iterations)
    solver.add_argument("--method", choices=[m.value for m in Method], default=config.method)
    solver.add_argument(
        "--margin", type=float, default=config.endpoint_margin, help="endpoint margin (fraction of width)"
    )

    grid = _ArgumentParser(add_help=False)
    grid.add_argument("--grid", type=int, default=config.grid_points, help="derivative scan grid points")

    parser = _ArgumentParser(prog="scalaropt", description="Bounded scalar optimization toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, handler, helptext in (
        ("minimize", _cmd_minimize, "local minimum on [lo, hi] (fminbnd)"),
        ("maximize", _cmd_maximize, "local maximum on [lo, hi] via -f"),
    ):
        sub = commands.add_parser(name, parents=[output, bounds, solver], help=helptext)
        sub.add_argument("expression", help='function of x, e.g. "3/sin(x) + 6/cos(x)"')
        sub.add_argument("--x0", type=float, help="start point; bracket downhill instead of --lo/--hi")
        sub.add_argument("--step", type=float, default=0.1, help="initial bracketing step")
        sub.set_defaults(handler=handler)

    for name, handler, helptext in (
        ("critical-points", _cmd_critical, "locate and classify critical points"),
        ("monotonic", _cmd_monotonic, "increasing/decreasing segments"),
        ("extrema", _cmd_extrema, "absolute minimum and maximum on [lo, hi]"),
    ):
        sub = commands.add_parser(name, parents=[output, bounds, grid], help=helptext)
        sub.add_argument("expression")
        sub.set_defaults(handler=handler)

    model = commands.add_parser("model", help="built-in applied models")
    kinds = model.add_subparsers(dest="model", required=True)
    pipe = kinds.add_parser("pipe", parents=[output, solver], help="longest pipe around a corner")
    pipe.add_argument("--a", type=float, default=config.pipe_a, help="first corridor width")
    pipe.add_argument("--b", type=float, default=config.pipe_b, help="second corridor width")
    pipe.add_argument("--plot", help="write L(alpha) with the optimum marked (.svg/.png/.csv)")
    pipe.set_defaults(handler=_cmd_model_pipe)
    cinema = kinds.add_parser("cinema", parents=[output, solver], help="best viewing distance")
    cinema.add_argument("--top", type=float, default=config.cinema_top, help="screen top above eye level")
    cinema.add_argument(
        "--bottom", type=float, default=config.cinema_bottom, help="screen bottom above eye level"
    )
    cinema.add_argument("--lo", type=float, help="search lower bound")
    cinema.add_argument("--hi", type=float, help="search upper bound")
    cinema.add_argument("--plot", help="write theta(x) with the optimum marked (.svg/.png/.csv)")
    cinema.set_defaults(handler=_cmd_model_cinema)

    plot = commands.add_parser("plot", parents=[output, bounds], help="sample a function to CSV/SVG/PNG")
    plot.add_argument("expression")
    plot.add_argument("--samples", type=int, default=config.samples)
    plot.add_argument("--out", help="output file; CSV/SVG go to stdout when omitted")
    plot.add_argument("--format", choices=PLOT_FORMATS)
    plot.add_argument("--mark-min", action="store_true", help="mark the minimum on the plot")
    plot.set_defaults(handler=_cmd_plot)

    settings = commands.add_parser("settings", parents=[output], help="show or change saved defaults")
    settings.add_argument("--set", action="append", metavar="KEY=VALUE", help="persist a default")
    settings.add_argument("--reset", action="store_true", help="delete saved settings")
    settings.set_defaults(handler=_cmd_settings)

    return parser


# ------------------------------------------------------------------
# Entry
# ------------------------------------------------------------------


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def run(argv: list[str] | None = None) -> int:
    """Parse argv, run one command, print its output; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    config = Config()
    load_settings(config)

    try:
        args = build_parser(config).parse_args(argv)
    except UsageError as exc:
        _error(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG if args.verbose > 1 else logging.INFO)

    handler: Handler = args.handler
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ScalarOptWarning)
        try:
            report, text = handler(args, config)
        except (ParseError, InvalidInput) as exc:
            _error(str(exc))
            return EXIT_USAGE
        except OSError as exc:
            _error(f"cannot write output: {exc}")
            return EXIT_USAGE
        except (SolverError, DomainFault) as exc:
            _error(str(exc))
            return EXIT_SOLVER
    end = time.perf_counter()

    report.warnings = [str(w.message) for w in caught if issubclass(w.category, ScalarOptWarning)]
    for w in caught:
        if not issubclass(w.category, ScalarOptWarning):
            log.debug("Suppressed %s: %s", w.category.__name__, w.message)
    report.elapsed_ms = 0.0 if args.no_timing else elapsed_ms(start, end)

    if args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        for message in report.warnings:
            print(f"warning: {message}", file=sys.stderr)
    return EXIT_OK
