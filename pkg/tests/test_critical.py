"""Tests for critical-point search, classification and monotonic segments."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from scalaropt.critical import (
    CriticalOptions,
    DerivativeTest,
    Direction,
    Kind,
    absolute_extrema,
    classify_first_derivative,
    classify_second_derivative,
    find_critical_points,
    monotonic_intervals,
    refine_root,
    scan_sign_changes,
)
from scalaropt.errors import (
    DroppedPointWarning,
    InvalidInput,
    PreconditionViolation,
    UnlabeledSegmentWarning,
)
from scalaropt.function import ExprFunction
from scalaropt.models import PipeModel, pipe_curve
from scalaropt.optimize import Interval

ALPHA_STAR = math.atan(0.5 ** (1 / 3))
L_STAR = (3 ** (2 / 3) + 6 ** (2 / 3)) ** 1.5
PIPE = "3*csc(x)+6*sec(x)"


def f(text: str) -> ExprFunction:
    return ExprFunction.from_text(text)


# ------------------------------------------------------------------
# scan_sign_changes / refine_root
# ------------------------------------------------------------------

def test_scan_cos() -> None:
    cells = scan_sign_changes(f("cos(x)"), Interval(0.0, math.pi), 101)
    assert len(cells) == 1
    assert cells[0].contains(math.pi / 2)


def test_scan_pipe_derivative() -> None:
    df = f(PIPE).derivative()
    cells = scan_sign_changes(df, Interval(0.01, 1.56), 1001)
    assert len(cells) == 1
    assert cells[0].contains(ALPHA_STAR)


def test_scan_constant_derivative() -> None:
    assert scan_sign_changes(f("1"), Interval(-5.0, 5.0), 101) == []


def test_scan_skips_poles() -> None:
    # node 1.5 faults; its neighbours differ in sign but the cell is not reported
    cells = scan_sign_changes(f("1/(x - 1.5)"), Interval(1.0, 2.0), 101)
    assert cells == []


def test_scan_bridges_root_on_a_node() -> None:
    cells = scan_sign_changes(f("x"), Interval(-1.0, 1.0), 3)
    assert cells == [Interval(-1.0, 1.0)]


def test_scan_rejects_tiny_grid() -> None:
    with pytest.raises(InvalidInput):
        scan_sign_changes(f("x"), Interval(0.0, 1.0), 2)


def test_refine_cos() -> None:
    assert refine_root(f("cos(x)"), Interval(1.4, 1.8), 1e-10) == pytest.approx(math.pi / 2, abs=1e-10)


def test_refine_cubic() -> None:
    assert refine_root(f("x^3"), Interval(-1.0, 2.0), 1e-10) == pytest.approx(0.0, abs=1e-10)


def test_refine_pipe_derivative() -> None:
    df = pipe_curve(PipeModel()).derivative()
    assert refine_root(df, Interval(0.6, 0.7), 1e-10) == pytest.approx(ALPHA_STAR, abs=1e-6)
    assert refine_root(df, Interval(0.6, 0.7), 1e-10) == pytest.approx(ALPHA_STAR, abs=1e-8)


@pytest.mark.parametrize(
    "text, cell",
    [("x", Interval(1.0, 2.0)), ("x", Interval(0.0, 1.0)), ("x^2 - 1", Interval(-2.0, 2.0))],
)
def test_refine_requires_straddle(text: str, cell: Interval) -> None:
    with pytest.raises(PreconditionViolation):
        refine_root(f(text), cell, 1e-10)


# ------------------------------------------------------------------
# Classification
# ------------------------------------------------------------------

def test_first_derivative_test() -> None:
    assert classify_first_derivative(f("2*x"), 0.0, 1e-3) is Kind.LOCAL_MIN
    assert classify_first_derivative(f("-2*x"), 0.0, 1e-3) is Kind.LOCAL_MAX
    assert classify_first_derivative(f("3*x^2"), 0.0, 1e-3) is Kind.NOT_EXTREMUM
    assert classify_first_derivative(f("0*x"), 0.0, 1e-3) is Kind.INCONCLUSIVE


def test_second_derivative_test() -> None:
    assert classify_second_derivative(2.0, 1e-8) is Kind.LOCAL_MIN
    assert classify_second_derivative(-2.0, 1e-8) is Kind.LOCAL_MAX
    assert classify_second_derivative(0.0, 1e-8) is Kind.INCONCLUSIVE
    assert classify_second_derivative(1e-9, 1e-8) is Kind.INCONCLUSIVE


def test_tests_agree_when_second_is_conclusive() -> None:
    g = f("sin(x) + x^2/10")
    for p in find_critical_points(g, Interval(-6.0, 6.0)):
        if p.test_used is DerivativeTest.SECOND and p.kind is not Kind.INCONCLUSIVE:
            assert classify_first_derivative(g.derivative(), p.x, 1e-4) is p.kind


# ------------------------------------------------------------------
# find_critical_points
# ------------------------------------------------------------------

def test_pipe_has_one_minimum() -> None:
    points = find_critical_points(f(PIPE), Interval(0.01, 1.56))
    assert len(points) == 1
    (p,) = points
    assert p.x == pytest.approx(ALPHA_STAR, abs=1e-6)
    assert p.f_value == pytest.approx(L_STAR, abs=1e-6)
    assert p.kind is Kind.LOCAL_MIN
    assert p.test_used is DerivativeTest.SECOND


def test_pipe_model_curve_matches_expression() -> None:
    points = find_critical_points(pipe_curve(PipeModel()), Interval(0.01, 1.56))
    assert [p.kind for p in points] == [Kind.LOCAL_MIN]
    assert points[0].f_value == pytest.approx(L_STAR, rel=1e-12)


def test_sin_over_full_period() -> None:
    points = find_critical_points(f("sin(x)"), Interval(0.0, 2 * math.pi))
    assert [p.kind for p in points] == [Kind.LOCAL_MAX, Kind.LOCAL_MIN]
    assert points[0].x == pytest.approx(math.pi / 2, abs=1e-9)
    assert points[0].f_value == pytest.approx(1.0, abs=1e-12)
    assert points[1].x == pytest.approx(3 * math.pi / 2, abs=1e-9)
    assert points[1].f_value == pytest.approx(-1.0, abs=1e-12)


def test_constant_has_no_critical_points() -> None:
    assert find_critical_points(f("5"), Interval(0.0, 1.0)) == []


def test_cubic_inflection_uses_first_derivative_test() -> None:
    points = find_critical_points(f("x^3"), Interval(-1.0, 1.0))
    assert len(points) == 1
    assert points[0].x == pytest.approx(0.0, abs=1e-9)
    assert points[0].kind is Kind.NOT_EXTREMUM
    assert points[0].test_used is DerivativeTest.FIRST


def test_quartic_flat_minimum() -> None:
    points = find_critical_points(f("(x - 0.3)^4"), Interval(-1.0, 1.0))
    assert len(points) == 1
    assert points[0].x == pytest.approx(0.3, abs=1e-3)
    assert points[0].kind is Kind.LOCAL_MIN


def test_residual_within_tolerance() -> None:
    opts = CriticalOptions()
    g = f("sin(3*x) + cos(x)/2")
    for p in find_critical_points(g, Interval(-4.0, 4.0), opts):
        assert p.derivative_residual <= opts.root_tolerance
        assert abs(g.derivative()(p.x)) <= opts.root_tolerance


def test_points_sorted_by_x() -> None:
    points = find_critical_points(f("sin(5*x)"), Interval(0.0, 3.0))
    xs = [p.x for p in points]
    assert xs == sorted(xs)
    assert len(points) == 5


def test_sign_change_across_pole_is_dropped() -> None:
    # f' = -2/x^3 flips sign at the pole, not at a root
    with pytest.warns(DroppedPointWarning):
        points = find_critical_points(f("1/x^2"), Interval(-1.0, 1.0), CriticalOptions(grid_points=100))
    assert points == []


def test_options_validation() -> None:
    with pytest.raises(InvalidInput):
        CriticalOptions(grid_points=2)
    with pytest.raises(InvalidInput):
        CriticalOptions(root_tolerance=0.0)


def _poly_text(coefficients: np.ndarray) -> str:
    return " + ".join(f"({float(c)!r})*x^{k}" for k, c in enumerate(coefficients))


def test_polynomial_oracle() -> None:
    rng = random.Random(1234)
    iv = Interval(-3.0, 3.0)
    for _ in range(50):
        count = rng.randint(1, 4)
        roots: list[float] = []
        while len(roots) < count:
            r = rng.uniform(-2.5, 2.5)
            if all(abs(r - s) > 0.05 for s in roots):
                roots.append(r)
        scale = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
        # f' = scale * prod(x - r); f is its antiderivative, degree <= 5
        derivative = np.polynomial.Polynomial.fromroots(roots) * scale
        g = f(_poly_text(derivative.integ().coef))

        points = find_critical_points(g, iv)
        assert len(points) == len(roots), (roots, [p.x for p in points])
        for p, r in zip(points, sorted(roots)):
            assert p.x == pytest.approx(r, abs=1e-6)
            assert p.kind in (Kind.LOCAL_MIN, Kind.LOCAL_MAX)


# ------------------------------------------------------------------
# monotonic_intervals
# ------------------------------------------------------------------

def test_parabola_segments() -> None:
    segments = monotonic_intervals(f("x^2"), Interval(-1.0, 1.0))
    assert [s.direction for s in segments] == [Direction.DECREASING, Direction.INCREASING]
    assert segments[0].interval.lo == -1.0
    assert segments[0].interval.hi == pytest.approx(0.0, abs=1e-9)
    assert segments[1].interval.hi == 1.0


def test_pipe_segments() -> None:
    segments = monotonic_intervals(f(PIPE), Interval(0.01, 1.56))
    assert [s.direction for s in segments] == [Direction.DECREASING, Direction.INCREASING]
    assert segments[0].interval.hi == pytest.approx(ALPHA_STAR, abs=1e-6)


def test_cubic_segments_both_increasing() -> None:
    segments = monotonic_intervals(f("x^3"), Interval(-1.0, 1.0))
    assert [s.direction for s in segments] == [Direction.INCREASING, Direction.INCREASING]


def test_segments_cover_interval_in_order() -> None:
    iv = Interval(-5.0, 5.0)
    g = f("sin(x) + x/3")
    segments = monotonic_intervals(g, iv)
    assert segments[0].interval.lo == iv.lo
    assert segments[-1].interval.hi == iv.hi
    for left, right in zip(segments, segments[1:]):
        assert left.interval.hi == right.interval.lo

    rng = random.Random(5)
    dg = g.derivative()
    for s in segments:
        for _ in range(10):
            x = rng.uniform(s.interval.lo, s.interval.hi)
            slope = dg(x)
            if abs(slope) > 1e-6:
                assert (slope > 0) == (s.direction is Direction.INCREASING)


def test_flat_function_segment_is_unlabeled() -> None:
    with pytest.warns(UnlabeledSegmentWarning):
        segments = monotonic_intervals(f("7 + 0*x"), Interval(0.0, 1.0))
    assert len(segments) == 1
    assert segments[0].direction is None


# ------------------------------------------------------------------
# absolute_extrema
# ------------------------------------------------------------------

def test_extrema_interior_and_endpoint() -> None:
    lowest, highest = absolute_extrema(f("x^3 - 3*x"), Interval(-3.0, 1.9))
    assert (lowest.x, lowest.f_value, lowest.where) == (-3.0, -18.0, "endpoint")
    assert highest.f_value == pytest.approx(2.0, abs=1e-12)
    assert highest.x == pytest.approx(-1.0, abs=1e-9)
    assert highest.where == "interior"


def test_extrema_with_faulting_endpoint() -> None:
    lowest, highest = absolute_extrema(f(PIPE), Interval(0.0, math.pi / 2 - 0.3))
    assert lowest.where == "interior"
    assert lowest.f_value == pytest.approx(L_STAR, rel=1e-12)
    assert highest.where == "endpoint"
    assert highest.x == pytest.approx(math.pi / 2 - 0.3)
