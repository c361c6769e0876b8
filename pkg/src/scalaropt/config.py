from __future__ import annotations

from dataclasses import dataclass

from scalaropt.critical import CriticalOptions
from scalaropt.numdiff import DiffConfig
from scalaropt.optimize import SolveOptions


@dataclass
class Config:
    """Application configuration with sensible defaults."""

    # Solver termination: bracket width <= 2 * x_tolerance * max(1, |x|)
    x_tolerance: float = 1e-8
    max_iterations: int = 500
    method: str = "brent"

    # Fraction of the interval width kept clear at each end
    endpoint_margin: float = 1e-9

    # Critical-point search
    grid_points: int = 1001
    root_tolerance: float = 1e-10
    zero_threshold: float = 1e-10
    # Relative to max(1, |f(x_c)|)
    curvature_threshold: float = 1e-8

    # Finite-difference steps
    first_step: float = 1e-5
    second_step: float = 1e-4

    # Plot output
    samples: int = 500
    plot_width: int = 640
    plot_height: int = 480

    # Built-in model defaults (feet for the pipe corridors)
    pipe_a: float = 3.0
    pipe_b: float = 6.0
    cinema_top: float = 10.0
    cinema_bottom: float = 3.0
    cinema_search_lo: float = 0.1
    cinema_search_hi: float = 100.0

    def solve_options(self) -> SolveOptions:
        """Solver options from the current defaults."""
        return SolveOptions(
            x_tolerance=self.x_tolerance,
            max_iterations=self.max_iterations,
            method=self.method,
            endpoint_margin=self.endpoint_margin,
        )

    def diff_config(self) -> DiffConfig:
        """Finite-difference steps from the current defaults."""
        return DiffConfig(first_step=self.first_step, second_step=self.second_step)

    def critical_options(self) -> CriticalOptions:
        """Critical-point scan options from the current defaults."""
        return CriticalOptions(
            grid_points=self.grid_points,
            root_tolerance=self.root_tolerance,
            zero_threshold=self.zero_threshold,
            curvature_threshold=self.curvature_threshold,
            diff=self.diff_config(),
        )
