"""Central finite differences for any ScalarFunction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scalaropt.errors import InvalidInput
from scalaropt.function import ScalarFunction


@dataclass(frozen=True)
class DiffConfig:
    """Finite-difference steps.

    Defaults sit near eps^(1/3) for the first derivative and eps^(1/4)
    for the second, where truncation and rounding error balance.
    """

    first_step: float = 1e-5
    second_step: float = 1e-4
    mode: str = "central"

    def __post_init__(self) -> None:
        for name in ("first_step", "second_step"):
            h = getattr(self, name)
            if not (math.isfinite(h) and h > 0):
                raise InvalidInput(f"{name} must be positive and finite, got {h!r}")
        if self.mode != "central":
            raise InvalidInput(f"unsupported difference mode {self.mode!r}")


def central_diff(f: ScalarFunction, x: float, cfg: DiffConfig | None = None) -> float:
    """(f(x+h) - f(x-h)) / 2h. Probe faults propagate as DomainFault."""
    h = (cfg or DiffConfig()).first_step
    return (f(x + h) - f(x - h)) / (2 * h)


def second_diff(f: ScalarFunction, x: float, cfg: DiffConfig | None = None) -> float:
    """(f(x+h) - 2f(x) + f(x-h)) / h^2."""
    h = (cfg or DiffConfig()).second_step
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


@dataclass(frozen=True)
class NumericDerivative(ScalarFunction):
    """f' approximated by central differences, for functions without a
    closed-form derivative."""

    inner: ScalarFunction
    cfg: DiffConfig = field(default_factory=DiffConfig)

    @property
    def label(self) -> str:
        return f"d/dx {self.inner.label} (central difference)"

    def __call__(self, x: float) -> float:
        return central_diff(self.inner, x, self.cfg)


def derivative_of(f: ScalarFunction, cfg: DiffConfig | None = None) -> ScalarFunction:
    """Exact derivative when f provides one, central differences otherwise."""
    exact = f.derivative()
    if exact is not None:
        return exact
    return NumericDerivative(f, cfg or DiffConfig())
