"""Built-in applied models with closed-form answers.

Pipe around a corner: a pipe carried horizontally from a corridor of
width ``a`` into a perpendicular corridor of width ``b`` touches the
inner corner at angle alpha; the segment length is
L(alpha) = a/sin(alpha) + b/cos(alpha). The longest pipe that makes the
turn is the minimum of L on (0, pi/2).

Cinema viewing angle: a screen spans heights [bottom, top] above eye
level; a viewer at horizontal distance x sees it under the angle
theta(x) = atan(top/x) - atan(bottom/x), largest at x = sqrt(top*bottom).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

from scalaropt.errors import BoundaryOptimumWarning, DomainFault, InvalidInput
from scalaropt.function import ModelCurve
from scalaropt.optimize import Interval, SolveOptions, maximize_bounded, minimize_bounded

log = logging.getLogger(__name__)

PIPE_DOMAIN = Interval(0.0, math.pi / 2)


@dataclass(frozen=True)
class PipeModel:
    """Corridor widths in any consistent length unit (feet by default)."""

    width_a: float = 3.0
    width_b: float = 6.0

    def __post_init__(self) -> None:
        for name in ("width_a", "width_b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be a positive length, got {value!r}")


@dataclass(frozen=True)
class CinemaModel:
    """Screen top and bottom heights above eye level."""

    top: float = 10.0
    bottom: float = 3.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.top) and math.isfinite(self.bottom)):
            raise InvalidInput("cinema heights must be finite")
        if not 0 <= self.bottom < self.top:
            raise InvalidInput(
                f"cinema model needs 0 <= bottom < top, got bottom={self.bottom!r} top={self.top!r}"
            )


# ------------------------------------------------------------------
# Pipe
# ------------------------------------------------------------------


def pipe_length(alpha: float, m: PipeModel) -> float:
    """L(alpha) = a csc(alpha) + b sec(alpha) for 0 < alpha < pi/2."""
    if not 0.0 < alpha < math.pi / 2:
        raise DomainFault(f"pipe angle {alpha!r} outside (0, pi/2)")
    return m.width_a / math.sin(alpha) + m.width_b / math.cos(alpha)


def _pipe_slope(alpha: float, m: PipeModel) -> float:
    if not 0.0 < alpha < math.pi / 2:
        raise DomainFault(f"pipe angle {alpha!r} outside (0, pi/2)")
    s, c = math.sin(alpha), math.cos(alpha)
    return -m.width_a * c / (s * s) + m.width_b * s / (c * c)


def pipe_curve(m: PipeModel) -> ModelCurve:
    """L(alpha) as a function with its closed-form slope."""
    return ModelCurve(
        f"pipe L(alpha), a={m.width_a:g}, b={m.width_b:g}",
        lambda alpha: pipe_length(alpha, m),
        lambda alpha: _pipe_slope(alpha, m),
    )


def pipe_closed_form(m: PipeModel) -> tuple[float, float]:
    """tan^3(alpha*) = a/b; L* = (a^(2/3) + b^(2/3))^(3/2)."""
    alpha_star = math.atan((m.width_a / m.width_b) ** (1.0 / 3.0))
    length_star = (m.width_a ** (2.0 / 3.0) + m.width_b ** (2.0 / 3.0)) ** 1.5
    return alpha_star, length_star


def pipe_max_length(m: PipeModel, opts: SolveOptions | None = None) -> tuple[float, float]:
    """Longest pipe that turns the corner.

    Returns:
        (alpha_star in radians, L_star)
    """
    result = minimize_bounded(pipe_curve(m), PIPE_DOMAIN, opts)
    log.info("Pipe a=%g b=%g: alpha*=%.10g L*=%.10g", m.width_a, m.width_b, result.x_min, result.f_min)
    return result.x_min, result.f_min


# ------------------------------------------------------------------
# Cinema
# ------------------------------------------------------------------


def cinema_angle(x: float, m: CinemaModel) -> float:
    """Angle subtended by the screen from horizontal distance x > 0."""
    if not x > 0:
        raise DomainFault(f"viewing distance must be positive, got {x!r}")
    return math.atan(m.top / x) - math.atan(m.bottom / x)


def _cinema_slope(x: float, m: CinemaModel) -> float:
    if not x > 0:
        raise DomainFault(f"viewing distance must be positive, got {x!r}")
    return -m.top / (x * x + m.top * m.top) + m.bottom / (x * x + m.bottom * m.bottom)


def cinema_curve(m: CinemaModel) -> ModelCurve:
    """theta(x) as a function with its closed-form slope."""
    return ModelCurve(
        f"cinema theta(x), top={m.top:g}, bottom={m.bottom:g}",
        lambda x: cinema_angle(x, m),
        lambda x: _cinema_slope(x, m),
    )


def cinema_closed_form(m: CinemaModel) -> tuple[float, float]:
    """x* = sqrt(top*bottom) and theta(x*); for bottom = 0 there is no
    interior optimum and this returns (0, pi/2), the limit as x -> 0."""
    if m.bottom == 0:
        return 0.0, math.pi / 2
    x_star = math.sqrt(m.top * m.bottom)
    return x_star, cinema_angle(x_star, m)


def cinema_best_distance(
    m: CinemaModel,
    search: Interval | None = None,
    opts: SolveOptions | None = None,
) -> tuple[float, float]:
    """Viewing distance with the widest angle.

    Returns:
        (x_star, theta_star in radians)
    """
    search = search or Interval(0.1, 100.0)
    if m.bottom == 0:
        warnings.warn(
            BoundaryOptimumWarning(
                "screen bottom at eye level: the angle grows as x -> 0, "
                f"so the best distance is the search bound {search.lo:g}"
            ),
            stacklevel=2,
        )
    elif not search.contains(math.sqrt(m.top * m.bottom)):
        warnings.warn(
            BoundaryOptimumWarning(
                f"optimum sqrt(top*bottom)={math.sqrt(m.top * m.bottom):g} lies outside "
                f"[{search.lo:g}, {search.hi:g}]"
            ),
            stacklevel=2,
        )
    result = maximize_bounded(cinema_curve(m), search, opts)
    theta_star = cinema_angle(result.x_min, m)
    log.info("Cinema top=%g bottom=%g: x*=%.10g theta*=%.10g", m.top, m.bottom, result.x_min, theta_star)
    return result.x_min, theta_star
