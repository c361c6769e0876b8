"""Evaluatable real -> real functions.

Every ``ScalarFunction`` either returns a finite float or raises
``DomainFault``. Solvers and scanners only ever talk to this interface,
so parsed expressions, built-in model curves and negations are
interchangeable.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property

from scalaropt.errors import DomainFault
from scalaropt.expr import Expr, compile_expr, differentiate, to_text
from scalaropt.parser import parse


class ScalarFunction(ABC):
    """A real function of one real variable."""

    @property
    @abstractmethod
    def label(self) -> str:
        """Human-readable description used in logs and reports."""

    @abstractmethod
    def __call__(self, x: float) -> float:
        """Evaluate at x; raise DomainFault outside the domain."""

    def derivative(self) -> ScalarFunction | None:
        """Exact first derivative, or None when only finite differences apply."""
        return None

    def __neg__(self) -> ScalarFunction:
        return Negated(self)


@dataclass(frozen=True)
class ExprFunction(ScalarFunction):
    """A parsed expression tree."""

    expr: Expr

    @classmethod
    def from_text(cls, text: str) -> ExprFunction:
        return cls(parse(text))

    @property
    def label(self) -> str:
        return to_text(self.expr)

    @cached_property
    def _compiled(self) -> Callable[[float], float]:
        return compile_expr(self.expr)

    def __call__(self, x: float) -> float:
        return self._compiled(x)

    def derivative(self) -> ExprFunction:
        return ExprFunction(differentiate(self.expr))


@dataclass(frozen=True)
class ModelCurve(ScalarFunction):
    """A built-in curve given as a Python callable, optionally with its
    closed-form derivative."""

    name: str
    func: Callable[[float], float] = field(compare=False)
    derivative_func: Callable[[float], float] | None = field(default=None, compare=False)

    @property
    def label(self) -> str:
        return self.name

    def __call__(self, x: float) -> float:
        try:
            value = self.func(x)
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise DomainFault(f"{self.name} undefined at x={x!r}") from exc
        if not math.isfinite(value):
            raise DomainFault(f"{self.name} not finite at x={x!r}")
        return value

    def derivative(self) -> ModelCurve | None:
        if self.derivative_func is None:
            return None
        return ModelCurve(f"d/dx {self.name}", self.derivative_func)


@dataclass(frozen=True)
class Negated(ScalarFunction):
    """-f, evaluated as exact float negation of f."""

    inner: ScalarFunction

    @property
    def label(self) -> str:
        return f"-({self.inner.label})"

    def __call__(self, x: float) -> float:
        return -self.inner(x)

    def derivative(self) -> ScalarFunction | None:
        d = self.inner.derivative()
        return None if d is None else Negated(d)

    def __neg__(self) -> ScalarFunction:
        return self.inner

