"""Expression trees for scalar functions of the single variable ``x``.

Nodes are immutable dataclasses. Evaluation never returns a non-finite
value: poles, invalid arguments and overflow raise ``DomainFault``.
Angles are radians throughout.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

from scalaropt.errors import DomainFault

log = logging.getLogger(__name__)


class UnaryOp(StrEnum):
    NEG = "neg"
    SIN = "sin"
    COS = "cos"
    TAN = "tan"
    CSC = "csc"
    SEC = "sec"
    COT = "cot"
    ASIN = "asin"
    ACOS = "acos"
    ATAN = "atan"
    SQRT = "sqrt"
    EXP = "exp"
    LN = "ln"
    ABS = "abs"


class BinaryOp(StrEnum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    POW = "pow"


# Function names accepted in text, i.e. every unary op except negation.
FUNCTIONS: frozenset[str] = frozenset(op.value for op in UnaryOp if op is not UnaryOp.NEG)

NAMED_CONSTANTS: dict[str, float] = {"pi": math.pi, "e": math.e}

VARIABLE_NAME = "x"


@dataclass(frozen=True)
class Constant:
    """Numeric literal, or a named constant when ``symbol`` is set."""

    value: float
    # "pi" or "e" when the constant was written by name
    symbol: str | None = None


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Unary:
    """Negation or a named function applied to one child."""

    op: UnaryOp
    child: Expr


@dataclass(frozen=True)
class Binary:
    """Arithmetic operator with two children."""

    op: BinaryOp
    left: Expr
    right: Expr


Expr = Constant | Variable | Unary | Binary

X = Variable()
ZERO = Constant(0.0)
ONE = Constant(1.0)


# ------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------


def _reciprocal(value: float, name: str, arg: float) -> float:
    if value == 0.0:
        raise DomainFault(f"{name} pole at argument {arg!r}")
    return 1.0 / value


_UNARY_IMPL: dict[UnaryOp, Callable[[float], float]] = {
    UnaryOp.NEG: lambda u: -u,
    UnaryOp.SIN: math.sin,
    UnaryOp.COS: math.cos,
    UnaryOp.TAN: math.tan,
    UnaryOp.CSC: lambda u: _reciprocal(math.sin(u), "csc", u),
    UnaryOp.SEC: lambda u: _reciprocal(math.cos(u), "sec", u),
    UnaryOp.COT: lambda u: _reciprocal(math.tan(u), "cot", u),
    UnaryOp.ASIN: math.asin,
    UnaryOp.ACOS: math.acos,
    UnaryOp.ATAN: math.atan,
    UnaryOp.SQRT: math.sqrt,
    UnaryOp.EXP: math.exp,
    UnaryOp.LN: math.log,
    UnaryOp.ABS: abs,
}


def _divide(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainFault(f"division by zero ({a!r}/0)")
    return a / b


_BINARY_IMPL: dict[BinaryOp, Callable[[float, float], float]] = {
    BinaryOp.ADD: lambda a, b: a + b,
    BinaryOp.SUB: lambda a, b: a - b,
    BinaryOp.MUL: lambda a, b: a * b,
    BinaryOp.DIV: _divide,
    # math.pow raises instead of returning complex for negative ** fractional
    BinaryOp.POW: math.pow,
}


def apply_unary(op: UnaryOp, u: float) -> float:
    """Apply one unary op, mapping every failure to DomainFault."""
    try:
        result = _UNARY_IMPL[op](u)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise DomainFault(f"{op.value} undefined at argument {u!r}") from exc
    if not math.isfinite(result):
        raise DomainFault(f"{op.value} not finite at argument {u!r}")
    return result


def apply_binary(op: BinaryOp, a: float, b: float) -> float:
    """Apply one binary op, mapping every failure to DomainFault."""
    try:
        result = _BINARY_IMPL[op](a, b)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise DomainFault(f"{op.value} undefined at ({a!r}, {b!r})") from exc
    if not math.isfinite(result):
        raise DomainFault(f"{op.value} not finite at ({a!r}, {b!r})")
    return result


def _finite_literal(value: float) -> float:
    if not math.isfinite(value):
        raise DomainFault(f"literal {value!r} is not finite")
    return value


def evaluate(e: Expr, x: float) -> float:
    """Evaluate ``e`` at ``x``; raises DomainFault instead of returning inf/nan."""
    match e:
        case Constant(value=value):
            return _finite_literal(value)
        case Variable():
            return x
        case Unary(op=op, child=child):
            return apply_unary(op, evaluate(child, x))
        case Binary(op=op, left=left, right=right):
            return apply_binary(op, evaluate(left, x), evaluate(right, x))
    raise TypeError(f"not an expression node: {e!r}")


def compile_expr(e: Expr) -> Callable[[float], float]:
    """Turn ``e`` into a closure with the same semantics as ``evaluate``.

    Avoids re-dispatching on node types for every call, which matters for
    grid scans with thousands of evaluations.
    """
    match e:
        case Constant(value=value):
            if not math.isfinite(value):
                return lambda x: _finite_literal(value)
            return lambda x: value
        case Variable():
            return lambda x: x
        case Unary(op=op, child=child):
            inner = compile_expr(child)
            return lambda x: apply_unary(op, inner(x))
        case Binary(op=op, left=left, right=right):
            lhs = compile_expr(left)
            rhs = compile_expr(right)
            return lambda x: apply_binary(op, lhs(x), rhs(x))
    raise TypeError(f"not an expression node: {e!r}")


def depends_on_x(e: Expr) -> bool:
    """True if the variable occurs anywhere in e."""
    match e:
        case Constant():
            return False
        case Variable():
            return True
        case Unary(child=child):
            return depends_on_x(child)
        case Binary(left=left, right=right):
            return depends_on_x(left) or depends_on_x(right)
    raise TypeError(f"not an expression node: {e!r}")


def node_count(e: Expr) -> int:
    """Number of nodes in the tree."""
    match e:
        case Unary(child=child):
            return 1 + node_count(child)
        case Binary(left=left, right=right):
            return 1 + node_count(left) + node_count(right)
    return 1


# ------------------------------------------------------------------
# Construction helpers
# ------------------------------------------------------------------


def const(value: float) -> Constant | Unary:
    """Numeric literal; negative values become ``-(|value|)`` so the tree prints
    and parses back to itself."""
    value = float(value)
    if math.copysign(1.0, value) < 0:
        return Unary(UnaryOp.NEG, Constant(-value))
    return Constant(value)


def fn(op: UnaryOp | str, child: Expr) -> Unary:
    """Function application, e.g. ``fn("sin", X)``."""
    return Unary(UnaryOp(op), child)


def neg(e: Expr) -> Unary:
    """-e"""
    return Unary(UnaryOp.NEG, e)


def add(a: Expr, b: Expr) -> Binary:
    """a + b"""
    return Binary(BinaryOp.ADD, a, b)


def sub(a: Expr, b: Expr) -> Binary:
    """a - b"""
    return Binary(BinaryOp.SUB, a, b)


def mul(a: Expr, b: Expr) -> Binary:
    """a * b"""
    return Binary(BinaryOp.MUL, a, b)


def div(a: Expr, b: Expr) -> Binary:
    """a / b"""
    return Binary(BinaryOp.DIV, a, b)


def power(a: Expr, b: Expr) -> Binary:
    """a ^ b"""
    return Binary(BinaryOp.POW, a, b)


# ------------------------------------------------------------------
# Differentiation
# ------------------------------------------------------------------


def _chain(op: UnaryOp, u: Expr) -> Expr:
    """Derivative of op(u) with respect to u (outer factor of the chain rule)."""
    match op:
        case UnaryOp.NEG:
            return neg(ONE)
        case UnaryOp.SIN:
            return fn("cos", u)
        case UnaryOp.COS:
            return neg(fn("sin", u))
        case UnaryOp.TAN:
            return power(fn("sec", u), const(2))
        case UnaryOp.CSC:
            return neg(mul(fn("csc", u), fn("cot", u)))
        case UnaryOp.SEC:
            return mul(fn("sec", u), fn("tan", u))
        case UnaryOp.COT:
            return neg(power(fn("csc", u), const(2)))
        case UnaryOp.ASIN:
            return div(ONE, fn("sqrt", sub(ONE, power(u, const(2)))))
        case UnaryOp.ACOS:
            return neg(div(ONE, fn("sqrt", sub(ONE, power(u, const(2))))))
        case UnaryOp.ATAN:
            return div(ONE, add(ONE, power(u, const(2))))
        case UnaryOp.SQRT:
            return div(ONE, mul(const(2), fn("sqrt", u)))
        case UnaryOp.EXP:
            return fn("exp", u)
        case UnaryOp.LN:
            return div(ONE, u)
        case UnaryOp.ABS:
            # sign(u); undefined at u = 0 where |u| has a corner
            return div(u, fn("abs", u))
    raise ValueError(f"no derivative rule for {op}")


def _diff(e: Expr) -> Expr:
    match e:
        case Constant():
            return ZERO
        case Variable():
            return ONE
        case Unary(op=UnaryOp.NEG, child=u):
            return neg(_diff(u))
        case Unary(op=op, child=u):
            return mul(_chain(op, u), _diff(u))
        case Binary(op=BinaryOp.ADD, left=u, right=v):
            return add(_diff(u), _diff(v))
        case Binary(op=BinaryOp.SUB, left=u, right=v):
            return sub(_diff(u), _diff(v))
        case Binary(op=BinaryOp.MUL, left=u, right=v):
            return add(mul(_diff(u), v), mul(u, _diff(v)))
        case Binary(op=BinaryOp.DIV, left=u, right=v):
            return div(sub(mul(_diff(u), v), mul(u, _diff(v))), power(v, const(2)))
        case Binary(op=BinaryOp.POW, left=u, right=v):
            if not depends_on_x(v):
                # power rule: v * u^(v-1) * u'
                return mul(mul(v, power(u, sub(v, ONE))), _diff(u))
            if not depends_on_x(u):
                # exponential rule: u^v * ln(u) * v'
                return mul(mul(e, fn("ln", u)), _diff(v))
            # general: u^v * (v' ln u + v u'/u)
            return mul(e, add(mul(_diff(v), fn("ln", u)), div(mul(v, _diff(u)), u)))
    raise TypeError(f"not an expression node: {e!r}")


def differentiate(e: Expr) -> Expr:
    """Symbolic derivative d/dx of ``e``, passed through ``simplify``."""
    return simplify(_diff(e))


# ------------------------------------------------------------------
# Simplification
# ------------------------------------------------------------------


def _is_const(e: Expr, value: float) -> bool:
    return isinstance(e, Constant) and e.value == value


def _number(e: Expr) -> float | None:
    """Value of a literal or a negated literal, else None."""
    match e:
        case Constant(value=v):
            return v
        case Unary(op=UnaryOp.NEG, child=Constant(value=v)):
            return -v
    return None


def _fold(e: Expr) -> Expr:
    """Fold a node whose children are all numbers, unless it faults.

    A negated literal is already folded and is returned unchanged.
    """
    try:
        match e:
            case Unary(op=UnaryOp.NEG, child=Constant()):
                return e
            case Unary(op=op, child=child) if _number(child) is not None:
                return const(apply_unary(op, _number(child)))
            case Binary(op=op, left=left, right=right) if (
                _number(left) is not None and _number(right) is not None
            ):
                return const(apply_binary(op, _number(left), _number(right)))
    except DomainFault:
        log.debug("Not folding faulting constant subtree %r", e)
    return e


def simplify(e: Expr) -> Expr:
    """Constant folding plus x+0, x-0, x*1, x*0, x/1 and x^1 elimination.

    No other algebra; the result equals the input wherever the input is
    defined.
    """
    match e:
        case Constant() | Variable():
            return e
        case Unary(op=op, child=child):
            return _fold(Unary(op, simplify(child)))
        case Binary(op=op, left=left, right=right):
            a = simplify(left)
            b = simplify(right)
            match op:
                case BinaryOp.ADD if _is_const(b, 0.0):
                    return a
                case BinaryOp.ADD if _is_const(a, 0.0):
                    return b
                case BinaryOp.SUB if _is_const(b, 0.0):
                    return a
                case BinaryOp.MUL if _is_const(a, 0.0) or _is_const(b, 0.0):
                    return ZERO
                case BinaryOp.MUL if _is_const(b, 1.0):
                    return a
                case BinaryOp.MUL if _is_const(a, 1.0):
                    return b
                case BinaryOp.DIV if _is_const(b, 1.0):
                    return a
                case BinaryOp.POW if _is_const(b, 1.0):
                    return a
            return _fold(Binary(op, a, b))
    raise TypeError(f"not an expression node: {e!r}")


# ------------------------------------------------------------------
# Printing
# ------------------------------------------------------------------

_BINARY_SYMBOL = {
    BinaryOp.ADD: " + ",
    BinaryOp.SUB: " - ",
    BinaryOp.MUL: "*",
    BinaryOp.DIV: "/",
    BinaryOp.POW: "^",
}

# Grammar levels: expr (sums) < term (products) < factor (negation, powers) < atom
_EXPR, _TERM, _FACTOR, _ATOM = range(4)


def _level(e: Expr) -> int:
    match e:
        case Binary(op=BinaryOp.ADD | BinaryOp.SUB):
            return _EXPR
        case Binary(op=BinaryOp.MUL | BinaryOp.DIV):
            return _TERM
        case Binary(op=BinaryOp.POW) | Unary(op=UnaryOp.NEG):
            return _FACTOR
    return _ATOM


def _wrap(e: Expr, needed: int) -> str:
    text = to_text(e)
    return f"({text})" if _level(e) < needed else text


def _format_number(value: float) -> str:
    text = repr(float(value))
    return f"({text})" if text.startswith("-") else text


def to_text(e: Expr) -> str:
    """Render ``e`` in the parser's grammar; ``parse(to_text(e)) == e``
    for every tree the parser, ``const``, ``differentiate`` or ``simplify``
    produce; only a hand-built negative ``Constant`` prints as ``(-v)``."""
    match e:
        case Constant(symbol=symbol) if symbol is not None:
            return symbol
        case Constant(value=value):
            return _format_number(value)
        case Variable():
            return VARIABLE_NAME
        case Unary(op=UnaryOp.NEG, child=child):
            return "-" + _wrap(child, _FACTOR)
        case Unary(op=op, child=child):
            return f"{op.value}({to_text(child)})"
        case Binary(op=BinaryOp.POW, left=left, right=right):
            return _wrap(left, _ATOM) + "^" + _wrap(right, _FACTOR)
        case Binary(op=op, left=left, right=right):
            level = _EXPR if op in (BinaryOp.ADD, BinaryOp.SUB) else _TERM
            return _wrap(left, level) + _BINARY_SYMBOL[op] + _wrap(right, level + 1)
    raise TypeError(f"not an expression node: {e!r}")
