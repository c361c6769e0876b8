"""Bounded scalar minimization with fminbnd semantics.

``minimize_bounded(f, Interval(x1, x2))`` returns the x and f(x) of a
local minimum inside [x1, x2], like Octave/MATLAB ``[x, fval] =
fminbnd(f, x1, x2)``. Brent's method (safeguarded parabolic
interpolation with golden-section fallback) is the default; plain
golden-section search is kept as a reference method.

The search never touches the exact endpoints: it runs on
[lo + m, hi - m] with m = endpoint_margin * (hi - lo). A probe that
raises DomainFault counts as +inf, so the point always loses a
comparison but never stops the solve.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, replace
from enum import StrEnum

from scalaropt.errors import (
    BracketFailure,
    DomainFault,
    InvalidInput,
    MaxIterationsWarning,
    NoEvaluablePoint,
    PreconditionViolation,
)
from scalaropt.function import ScalarFunction

log = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi, the golden-section ratio
INV_PHI_SQUARED = (3 - math.sqrt(5)) / 2  # 1 / phi^2 = 1 - INV_PHI
BRACKET_GROWTH = 1.618034
MAX_BRACKET_EXPANSIONS = 100


class Method(StrEnum):
    """Minimization algorithm."""

    BRENT = "brent"
    GOLDEN = "golden"


@dataclass(frozen=True)
class Interval:
    """Closed search interval [lo, hi] with lo < hi, both finite."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInput(f"interval bounds must be finite, got [{self.lo!r}, {self.hi!r}]")
        if not self.lo < self.hi:
            raise InvalidInput(f"interval needs lo < hi, got [{self.lo!r}, {self.hi!r}]")

    @property
    def width(self) -> float:
        """hi - lo"""
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        """Centre of the interval."""
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        """Closed-interval membership."""
        return self.lo <= x <= self.hi

    def shrink(self, margin: float) -> Interval:
        """Pull both ends in by ``margin`` times the width."""
        m = margin * self.width
        return Interval(self.lo + m, self.hi - m)


@dataclass(frozen=True)
class SolveOptions:
    """Tolerance, iteration cap, method and endpoint margin for one solve."""

    x_tolerance: float = 1e-8
    max_iterations: int = 500
    method: Method = Method.BRENT
    endpoint_margin: float = 1e-9

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_tolerance) and self.x_tolerance > 0):
            raise InvalidInput(f"x_tolerance must be positive, got {self.x_tolerance!r}")
        if self.max_iterations < 1:
            raise InvalidInput(f"max_iterations must be >= 1, got {self.max_iterations!r}")
        if not 0 <= self.endpoint_margin < 0.5:
            raise InvalidInput(f"endpoint_margin must be in [0, 0.5), got {self.endpoint_margin!r}")
        try:
            object.__setattr__(self, "method", Method(self.method))
        except ValueError as exc:
            raise InvalidInput(f"unknown method {self.method!r}") from exc

    def tolerance_at(self, x: float) -> float:
        """Bracket width that counts as converged around x."""
        return 2.0 * self.x_tolerance * max(1.0, abs(x))


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of a bounded solve; ``x_min``/``f_min`` mirror fminbnd's x/fval."""

    x_min: float
    f_min: float
    iterations: int
    function_evaluations: int
    converged: bool
    # width of the searched bracket, which starts as iv.shrink(endpoint_margin)
    final_bracket_width: float
    method: Method = Method.BRENT
    # best f seen after each iteration
    history: tuple[float, ...] = ()


class _Probe:
    """Counts evaluations and turns DomainFault into +inf."""

    def __init__(self, f: ScalarFunction) -> None:
        self.f = f
        self.evaluations = 0
        self.faults = 0

    def __call__(self, x: float) -> float:
        self.evaluations += 1
        try:
            return self.f(x)
        except DomainFault as exc:
            self.faults += 1
            log.debug("Probe at %r faulted: %s", x, exc)
            return math.inf


def _finish(
    probe: _Probe,
    method: Method,
    x: float,
    fx: float,
    iterations: int,
    converged: bool,
    width: float,
    history: list[float],
    opts: SolveOptions,
) -> MinimizeResult:
    if math.isinf(fx):
        raise NoEvaluablePoint(
            f"{probe.f.label}: all {probe.evaluations} probes faulted"
        )
    if not converged:
        warnings.warn(
            MaxIterationsWarning(
                f"{method.value} stopped after {opts.max_iterations} iterations "
                f"with bracket width {width:.3g}"
            ),
            stacklevel=3,
        )
    log.info(
        "%s: x=%.10g f=%.10g after %d iterations, %d evaluations (%d faulted)",
        method.value,
        x,
        fx,
        iterations,
        probe.evaluations,
        probe.faults,
    )
    return MinimizeResult(
        x_min=x,
        f_min=fx,
        iterations=iterations,
        function_evaluations=probe.evaluations,
        converged=converged,
        final_bracket_width=width,
        method=method,
        history=tuple(history),
    )


# ------------------------------------------------------------------
# Golden-section search
# ------------------------------------------------------------------


def golden_section(
    f: ScalarFunction, iv: Interval, opts: SolveOptions | None = None
) -> MinimizeResult:
    """Golden-section reduction: each iteration keeps the better interior
    point and shrinks the bracket by exactly INV_PHI."""
    opts = opts or SolveOptions()
    search = iv.shrink(opts.endpoint_margin)
    probe = _Probe(f)

    a, b = search.lo, search.hi
    h = b - a
    c = a + INV_PHI_SQUARED * h
    d = a + INV_PHI * h
    yc = probe(c)
    yd = probe(d)
    # ties keep the earlier point
    best_x, best_f = (c, yc) if yc <= yd else (d, yd)

    history: list[float] = []
    iterations = 0
    converged = False
    while True:
        if h <= opts.tolerance_at(best_x):
            converged = True
            break
        if iterations >= opts.max_iterations:
            break
        iterations += 1

        if yc < yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARED * h
            x_new = c
            yc = y_new = probe(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            x_new = d
            yd = y_new = probe(d)

        if y_new < best_f:
            best_x, best_f = x_new, y_new
        history.append(best_f)
        log.debug("golden %d: [%.12g, %.12g] best f=%.12g", iterations, a, b, best_f)

    return _finish(probe, Method.GOLDEN, best_x, best_f, iterations, converged, h, history, opts)


# ------------------------------------------------------------------
# Brent's method
# ------------------------------------------------------------------


def brent_min(
    f: ScalarFunction, iv: Interval, opts: SolveOptions | None = None
) -> MinimizeResult:
    """Brent's bounded minimizer, the algorithm behind fminbnd.

    x is the best point so far, w the second best, v the previous w.
    Each iteration fits a parabola through (v, w, x) and takes its
    vertex if it lands inside the bracket and moves less than half the
    step before last; otherwise it takes a golden-section step into the
    larger half of the bracket.
    """
    opts = opts or SolveOptions()
    search = iv.shrink(opts.endpoint_margin)
    probe = _Probe(f)

    a, b = search.lo, search.hi
    x = w = v = a + INV_PHI_SQUARED * (b - a)
    fx = probe(x)
    fw = fv = fx
    d = e = 0.0

    history: list[float] = []
    iterations = 0
    converged = False
    while True:
        xm = 0.5 * (a + b)
        tol1 = 0.25 * opts.tolerance_at(x)
        tol2 = 2.0 * tol1
        # implies b - a <= 2 * tol2
        if abs(x - xm) <= tol2 - 0.5 * (b - a):
            converged = True
            break
        if iterations >= opts.max_iterations:
            break
        iterations += 1

        golden = True
        if abs(e) > tol1 and math.isfinite(fx) and math.isfinite(fw) and math.isfinite(fv):
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            r = e
            e = d

            if abs(p) < abs(0.5 * q * r) and q * (a - x) < p < q * (b - x):
                golden = False
                d = p / q
                u = x + d
                # too close to the bracket ends: step tol1 toward the middle
                if (u - a) < tol2 or (b - u) < tol2:
                    d = tol1 if xm >= x else -tol1

        if golden:
            e = (a - x) if x >= xm else (b - x)
            d = INV_PHI_SQUARED * e

        if abs(d) < tol1:
            # vertex sits on x: probe tol1 toward the middle of the bracket
            d = tol1 if xm >= x else -tol1
        u = x + d
        fu = probe(u)

        # strict: on a plateau the older best point stays
        if fu < fx:
            if u >= x:
                a = x
            else:
                b = x
            v, fv = w, fw
            w, fw = x, fx
            x, fx = u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv = w, fw
                w, fw = u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu

        history.append(fx)
        log.debug(
            "brent %d: %s step to %.12g, best x=%.12g f=%.12g",
            iterations,
            "golden" if golden else "parabolic",
            u,
            x,
            fx,
        )

    return _finish(probe, Method.BRENT, x, fx, iterations, converged, b - a, history, opts)


# ------------------------------------------------------------------
# Public entry points
# ------------------------------------------------------------------


def minimize_bounded(
    f: ScalarFunction, iv: Interval, opts: SolveOptions | None = None
) -> MinimizeResult:
    """fminbnd: a local (not certified global) minimum of f on iv."""
    opts = opts or SolveOptions()
    log.info("Minimizing %s on [%.10g, %.10g] with %s", f.label, iv.lo, iv.hi, opts.method.value)
    if opts.method is Method.GOLDEN:
        return golden_section(f, iv, opts)
    return brent_min(f, iv, opts)


def maximize_bounded(
    f: ScalarFunction, iv: Interval, opts: SolveOptions | None = None
) -> MinimizeResult:
    """Maximize f by minimizing -f; the reported f_min is the maximum of f."""
    result = minimize_bounded(-f, iv, opts)
    return replace(
        result,
        f_min=-result.f_min,
        history=tuple(-value for value in result.history),
    )


def bracket_minimum(
    f: ScalarFunction, x0: float, step: float
) -> tuple[float, float, float]:
    """Walk downhill from x0 with geometrically growing steps until the
    function turns up again.

    Returns:
        (a, b, c) with a < b < c, f(b) < f(a) and f(b) < f(c).

    Raises:
        BracketFailure: no upturn within MAX_BRACKET_EXPANSIONS steps.
    """
    if not (math.isfinite(step) and step > 0):
        raise InvalidInput(f"bracket step must be positive, got {step!r}")
    probe = _Probe(f)

    a, b = x0, x0 + step
    fa, fb = probe(a), probe(b)
    if math.isinf(fa) and math.isinf(fb):
        raise PreconditionViolation(f"{f.label} is not evaluable at {a!r} or {b!r}")
    if fb > fa:
        a, b, fa, fb = b, a, fb, fa
    c = b + BRACKET_GROWTH * (b - a)
    fc = probe(c)

    expansions = 0
    while not fc > fb:
        expansions += 1
        if expansions > MAX_BRACKET_EXPANSIONS:
            raise BracketFailure(
                f"{f.label}: no minimum bracketed after {MAX_BRACKET_EXPANSIONS} "
                f"expansions from x0={x0!r} (monotone on the explored ray?)"
            )
        a, fa, b, fb = b, fb, c, fc
        c = b + BRACKET_GROWTH * (b - a)
        fc = probe(c)

    if not fb < fa:
        raise BracketFailure(f"{f.label}: flat near {b!r}, cannot bracket a minimum")
    log.debug("Bracketed minimum of %s in (%.10g, %.10g, %.10g)", f.label, a, b, c)
    return (a, b, c) if a < c else (c, b, a)
