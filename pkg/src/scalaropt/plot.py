"""Sampled curves and their CSV, SVG and PNG renderings.

A ``PlotSeries`` keeps every sample position; where the function
faulted (a pole) the y value is None and the drawn line breaks there.
All output is deterministic for identical input.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

from scalaropt.errors import AllPointsFault, DomainFault, InvalidInput
from scalaropt.function import ScalarFunction
from scalaropt.optimize import Interval

log = logging.getLogger(__name__)

Marker = tuple[float, float, str]


@dataclass(frozen=True)
class PlotSeries:
    """Sampled curve, with None where the function faulted."""

    xs: tuple[float, ...]
    # None where the function faulted
    ys: tuple[float | None, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.xs) != len(self.ys):
            raise InvalidInput("plot series needs one y per x")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise InvalidInput("plot series x values must be strictly increasing")
        if any(y is not None and not math.isfinite(y) for y in self.ys):
            raise InvalidInput("plot series y values must be finite")

    @property
    def gaps(self) -> tuple[int, ...]:
        """Indices of the faulted samples."""
        return tuple(i for i, y in enumerate(self.ys) if y is None)

    @property
    def samples(self) -> list[tuple[float, float]]:
        """The (x, y) pairs that evaluated."""
        return [(x, y) for x, y in zip(self.xs, self.ys) if y is not None]

    def runs(self) -> list[list[tuple[float, float]]]:
        """Consecutive finite samples, split at every gap.

        Empty runs are dropped, so a gap on an endpoint or two adjacent gaps
        give fewer than ``len(gaps) + 1`` runs. Each run is one drawn line.
        """
        runs: list[list[tuple[float, float]]] = [[]]
        for x, y in zip(self.xs, self.ys):
            if y is None:
                runs.append([])
            else:
                runs[-1].append((x, y))
        return [run for run in runs if run]


def sample(f: ScalarFunction, iv: Interval, n: int) -> PlotSeries:
    """n uniform samples of f over iv, including both endpoints."""
    if n < 2:
        raise InvalidInput(f"need at least 2 samples, got {n!r}")
    xs = tuple(float(x) for x in np.linspace(iv.lo, iv.hi, n))
    ys: list[float | None] = []
    for x in xs:
        try:
            ys.append(f(x))
        except DomainFault:
            ys.append(None)
    series = PlotSeries(xs, tuple(ys), f.label)
    if not series.samples:
        raise AllPointsFault(f"{f.label} faulted at all {n} samples on [{iv.lo:g}, {iv.hi:g}]")
    log.debug("Sampled %s: %d points, %d gaps", f.label, n, len(series.gaps))
    return series


def emit_csv(series: PlotSeries) -> str:
    """``x,y`` header then one row per sample; gaps have an empty y."""
    lines = ["x,y"]
    for x, y in zip(series.xs, series.ys):
        lines.append(f"{x!r}," if y is None else f"{x!r},{y!r}")
    return "\n".join(lines) + "\n"



# ------------------------------------------------------------------
# Figures
# ------------------------------------------------------------------

_DPI = 100
_MIN_SIZE_PX = 100
_LINE_COLOR = "#1f77b4"
_MARKER_COLOR = "#d62728"

# text stays text in SVG, and generated ids do not change between runs
_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "scalaropt",
    "path.simplify": False,
}


def _figure(series: PlotSeries, width_px: int, height_px: int, markers: list[Marker]) -> Figure:
    """Curve, axes and markers on a fresh Agg-backed figure."""
    if width_px < _MIN_SIZE_PX or height_px < _MIN_SIZE_PX:
        raise InvalidInput(f"plot size {width_px}x{height_px} is too small")
    if not series.samples:
        raise InvalidInput("cannot plot a series without finite samples")

    fig = Figure(figsize=(width_px / _DPI, height_px / _DPI), dpi=_DPI, layout="constrained")
    ax = fig.subplots()
    # NaN breaks the line at every gap
    ys = np.array([np.nan if y is None else y for y in series.ys], dtype=float)
    ax.plot(series.xs, ys, color=_LINE_COLOR, linewidth=1.5, gid="curve")
    for i, (mx, my, label) in enumerate(markers):
        ax.plot([mx], [my], "o", color=_MARKER_COLOR, markersize=6, gid=f"marker{i}")
        ax.annotate(
            label, (mx, my), xytext=(8, 8), textcoords="offset points", color=_MARKER_COLOR
        )
    ax.set_xlabel("x")
    ax.set_title(series.label)
    ax.grid(True, alpha=0.3)
    return fig


def _save(fig: Figure, fmt: str, metadata: dict) -> bytes:
    buf = io.BytesIO()
    with mpl.rc_context(_RC):
        fig.savefig(buf, format=fmt, metadata=metadata)
    return buf.getvalue()


def emit_svg(
    series: PlotSeries,
    width_px: int = 640,
    height_px: int = 480,
    markers: list[Marker] | None = None,
) -> str:
    """Standalone SVG document, starting at the ``<svg>`` root element.

    The curve is the element with id ``curve``; each unbroken run is one
    ``M`` subpath of it. Markers are ``marker0``, ``marker1``, ...
    """
    with mpl.rc_context(_RC):
        fig = _figure(series, width_px, height_px, markers or [])
    text = _save(fig, "svg", {"Date": None}).decode("utf-8")
    return text[text.index("<svg"):]


def emit_png(
    series: PlotSeries,
    width_px: int = 640,
    height_px: int = 480,
    markers: list[Marker] | None = None,
) -> bytes:
    """The same plot rasterised by Agg, returned as PNG bytes."""
    with mpl.rc_context(_RC):
        fig = _figure(series, width_px, height_px, markers or [])
    return _save(fig, "png", {"Software": None})
