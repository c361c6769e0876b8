"""Critical points, their classification and monotonic segments.

Pipeline: sample f' on a uniform grid, keep the cells where its sign
flips, bisect each down to a root, then classify the root with the
second-derivative test, falling back to the first-derivative test when
the curvature is too small to decide.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from scalaropt.errors import (
    DomainFault,
    DroppedPointWarning,
    InvalidInput,
    NoEvaluablePoint,
    PreconditionViolation,
    UnlabeledSegmentWarning,
)
from scalaropt.function import ScalarFunction
from scalaropt.numdiff import DiffConfig, NumericDerivative, central_diff, derivative_of, second_diff
from scalaropt.optimize import Interval

log = logging.getLogger(__name__)

MAX_BISECTIONS = 200


class Kind(StrEnum):
    """Classification of a critical point."""

    LOCAL_MIN = "LocalMin"
    LOCAL_MAX = "LocalMax"
    NOT_EXTREMUM = "NotExtremum"
    INCONCLUSIVE = "Inconclusive"


class DerivativeTest(StrEnum):
    FIRST = "FirstDerivative"
    SECOND = "SecondDerivative"


class Direction(StrEnum):
    """Sign of f' on a monotonic segment."""

    INCREASING = "Increasing"
    DECREASING = "Decreasing"


@dataclass(frozen=True)
class CriticalPoint:
    """A classified root of f'."""

    x: float
    f_value: float
    kind: Kind
    test_used: DerivativeTest
    # |f'(x)| at the reported point
    derivative_residual: float


@dataclass(frozen=True)
class MonotonicSegment:
    """Piece of the interval between consecutive critical points."""

    interval: Interval
    # None when f' at the midpoint was zero or undefined
    direction: Direction | None


@dataclass(frozen=True)
class Extremum:
    """Absolute minimum or maximum and where it was found."""

    x: float
    f_value: float
    where: str  # "interior" or "endpoint"


@dataclass(frozen=True)
class CriticalOptions:
    """Grid, tolerances and thresholds for the critical-point scan."""

    grid_points: int = 1001
    root_tolerance: float = 1e-10
    # |f'| at or below this counts as zero in sign probes
    zero_threshold: float = 1e-10
    # scaled by max(1, |f(x_c)|)
    curvature_threshold: float = 1e-8
    diff: DiffConfig = field(default_factory=DiffConfig)

    def __post_init__(self) -> None:
        if self.grid_points < 3:
            raise InvalidInput(f"grid_points must be >= 3, got {self.grid_points!r}")
        for name in ("root_tolerance", "zero_threshold", "curvature_threshold"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be positive, got {value!r}")

    @property
    def probe_delta(self) -> float:
        """Initial stand-off for first-derivative probes; must exceed root error."""
        return max(1e-6, 10 * self.root_tolerance)


# ------------------------------------------------------------------
# Sign scanning
# ------------------------------------------------------------------


def _grid_signs(
    df: ScalarFunction, iv: Interval, grid_points: int, zero_threshold: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample df on the grid.

    Returns:
        (xs, signs, ok): signs in {-1, 0, 1}; ok is False where df faulted
        (those nodes carry sign 0 and never take part in a sign change).
    """
    xs = np.linspace(iv.lo, iv.hi, grid_points)
    values = np.zeros(grid_points)
    ok = np.ones(grid_points, dtype=bool)
    for i, x in enumerate(xs):
        try:
            values[i] = df(float(x))
        except DomainFault:
            ok[i] = False
    signs = np.where(np.abs(values) <= zero_threshold, 0.0, np.sign(values))
    signs[~ok] = 0.0
    return xs, signs, ok


def _straddling_cells(xs: np.ndarray, signs: np.ndarray, ok: np.ndarray) -> list[Interval]:
    cells = [
        Interval(float(xs[i]), float(xs[i + 1]))
        for i in np.flatnonzero(signs[:-1] * signs[1:] < 0)
    ]
    # a root sitting exactly on a node: bridge its two neighbours
    on_node = (signs[1:-1] == 0) & ok[1:-1] & (signs[:-2] * signs[2:] < 0)
    cells += [Interval(float(xs[i]), float(xs[i + 2])) for i in np.flatnonzero(on_node)]
    return sorted(cells, key=lambda cell: cell.lo)


def _touching_nodes(xs: np.ndarray, signs: np.ndarray, ok: np.ndarray) -> list[float]:
    """Interior nodes where df is zero but keeps its sign on both sides."""
    touch = (
        (signs[1:-1] == 0)
        & ok[1:-1]
        & (signs[:-2] == signs[2:])
        & (signs[:-2] != 0)
    )
    return [float(xs[i + 1]) for i in np.flatnonzero(touch)]


def scan_sign_changes(
    df: ScalarFunction,
    iv: Interval,
    grid_points: int,
    zero_threshold: float = 1e-10,
) -> list[Interval]:
    """Grid cells over which df changes sign.

    Faulting nodes are skipped, so no cell touching a pole is reported.
    """
    if grid_points < 3:
        raise InvalidInput(f"grid_points must be >= 3, got {grid_points!r}")
    xs, signs, ok = _grid_signs(df, iv, grid_points, zero_threshold)
    cells = _straddling_cells(xs, signs, ok)
    log.debug("%d sign changes of %s on [%g, %g]", len(cells), df.label, iv.lo, iv.hi)
    return cells


def refine_root(df: ScalarFunction, cell: Interval, root_tolerance: float) -> float:
    """Bisect a sign-straddling cell.

    Stops once the cell is no wider than root_tolerance and |df| at its
    midpoint is within root_tolerance too, or when floating point can no
    longer split the cell.
    """
    lo, hi = cell.lo, cell.hi
    f_lo, f_hi = df(lo), df(hi)
    if f_lo == 0 or f_hi == 0 or (f_lo < 0) == (f_hi < 0):
        raise PreconditionViolation(
            f"{df.label} does not change sign on [{lo!r}, {hi!r}] ({f_lo!r}, {f_hi!r})"
        )

    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        f_mid = df(mid)
        if f_mid == 0.0:
            return mid
        if hi - lo <= root_tolerance and abs(f_mid) <= root_tolerance:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------------------------
# Classification
# ------------------------------------------------------------------


def classify_first_derivative(
    df: ScalarFunction, x_c: float, probe_delta: float, zero_threshold: float = 1e-10
) -> Kind:
    """First derivative test: how f' changes sign across x_c."""
    left = df(x_c - probe_delta)
    right = df(x_c + probe_delta)
    if abs(left) <= zero_threshold or abs(right) <= zero_threshold:
        return Kind.INCONCLUSIVE
    if left > 0 and right < 0:
        return Kind.LOCAL_MAX
    if left < 0 and right > 0:
        return Kind.LOCAL_MIN
    return Kind.NOT_EXTREMUM


def classify_second_derivative(d2f_value: float, curvature_threshold: float) -> Kind:
    """Second derivative test on f''(x_c); zero curvature is inconclusive."""
    if d2f_value > curvature_threshold:
        return Kind.LOCAL_MIN
    if d2f_value < -curvature_threshold:
        return Kind.LOCAL_MAX
    return Kind.INCONCLUSIVE


class _Derivatives:
    """f' and a way to get f'' at a point, exact where the function allows."""

    def __init__(self, f: ScalarFunction, cfg: DiffConfig) -> None:
        self.f = f
        self.cfg = cfg
        self.df = derivative_of(f, cfg)
        self.numeric = isinstance(self.df, NumericDerivative)
        self.d2f = None if self.numeric else self.df.derivative()

    def second(self, x: float) -> float:
        if self.numeric:
            return second_diff(self.f, x, self.cfg)
        if self.d2f is not None:
            return self.d2f(x)
        return central_diff(self.df, x, self.cfg)


def _classify(
    derivs: _Derivatives, x_c: float, opts: CriticalOptions, max_delta: float
) -> CriticalPoint:
    f_value = derivs.f(x_c)
    residual = abs(derivs.df(x_c))
    curvature = derivs.second(x_c)
    threshold = opts.curvature_threshold * max(1.0, abs(f_value))

    kind = classify_second_derivative(curvature, threshold)
    if kind is not Kind.INCONCLUSIVE:
        return CriticalPoint(x_c, f_value, kind, DerivativeTest.SECOND, residual)

    # widen the probes until f' is measurably non-zero, up to one grid spacing
    delta = opts.probe_delta
    while True:
        first = classify_first_derivative(derivs.df, x_c, delta, opts.zero_threshold)
        if first is not Kind.INCONCLUSIVE:
            return CriticalPoint(x_c, f_value, first, DerivativeTest.FIRST, residual)
        delta *= 10
        if delta > max_delta:
            return CriticalPoint(x_c, f_value, Kind.INCONCLUSIVE, DerivativeTest.SECOND, residual)


def _drop(x: float, reason: str) -> None:
    warnings.warn(DroppedPointWarning(f"critical point near x={x:.10g} dropped: {reason}"), stacklevel=3)


def find_critical_points(
    f: ScalarFunction, iv: Interval, opts: CriticalOptions | None = None
) -> list[CriticalPoint]:
    """All critical points the grid resolves on iv, sorted by x.

    Points whose probes fault, or whose |f'| exceeds root_tolerance after
    refinement (a sign change across a pole), are dropped with a
    DroppedPointWarning.
    """
    opts = opts or CriticalOptions()
    derivs = _Derivatives(f, opts.diff)
    xs, signs, ok = _grid_signs(derivs.df, iv, opts.grid_points, opts.zero_threshold)
    spacing = float(xs[1] - xs[0])

    candidates: list[float] = []
    for cell in _straddling_cells(xs, signs, ok):
        try:
            candidates.append(refine_root(derivs.df, cell, opts.root_tolerance))
        except DomainFault as exc:
            _drop(cell.midpoint, str(exc))
    candidates.extend(_touching_nodes(xs, signs, ok))

    points: list[CriticalPoint] = []
    for x_c in sorted(candidates):
        try:
            point = _classify(derivs, x_c, opts, max(opts.probe_delta, spacing))
        except DomainFault as exc:
            _drop(x_c, str(exc))
            continue
        if point.derivative_residual > opts.root_tolerance:
            _drop(x_c, f"|f'| = {point.derivative_residual:.3g} exceeds root tolerance")
            continue
        points.append(point)

    log.info("Found %d critical points of %s on [%g, %g]", len(points), f.label, iv.lo, iv.hi)
    return points


def monotonic_intervals(
    f: ScalarFunction, iv: Interval, opts: CriticalOptions | None = None
) -> list[MonotonicSegment]:
    """Split iv at its critical points and label each piece by the sign of f'."""
    opts = opts or CriticalOptions()
    derivs = _Derivatives(f, opts.diff)
    cuts = [p.x for p in find_critical_points(f, iv, opts) if iv.lo < p.x < iv.hi]
    bounds = [iv.lo, *cuts, iv.hi]

    segments: list[MonotonicSegment] = []
    for lo, hi in zip(bounds, bounds[1:]):
        piece = Interval(lo, hi)
        try:
            slope = derivs.df(piece.midpoint)
        except DomainFault:
            slope = 0.0
        if slope > opts.zero_threshold:
            direction: Direction | None = Direction.INCREASING
        elif slope < -opts.zero_threshold:
            direction = Direction.DECREASING
        else:
            direction = None
            warnings.warn(
                UnlabeledSegmentWarning(
                    f"f' is zero or undefined at the midpoint of [{lo:.10g}, {hi:.10g}]"
                ),
                stacklevel=2,
            )
        segments.append(MonotonicSegment(piece, direction))
    return segments


def absolute_extrema(
    f: ScalarFunction, iv: Interval, opts: CriticalOptions | None = None
) -> tuple[Extremum, Extremum]:
    """Closed-interval method: the lowest and highest of f over the
    critical points and the (evaluable) endpoints.

    Returns:
        (lowest, highest)
    """
    candidates: list[Extremum] = []
    for x in (iv.lo, iv.hi):
        try:
            candidates.append(Extremum(x, f(x), "endpoint"))
        except DomainFault:
            log.debug("Endpoint %r of %s is not evaluable", x, f.label)
    candidates += [
        Extremum(p.x, p.f_value, "interior") for p in find_critical_points(f, iv, opts)
    ]
    if not candidates:
        raise NoEvaluablePoint(f"{f.label}: no evaluable endpoint or critical point")
    candidates.sort(key=lambda c: c.x)
    lowest = min(candidates, key=lambda c: c.f_value)
    highest = max(candidates, key=lambda c: c.f_value)
    return lowest, highest
