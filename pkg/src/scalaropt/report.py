"""Machine-readable run reports.

Every command can emit one JSON object with stable field names:
``command``, ``inputs``, ``result``, ``warnings``, ``elapsed_ms``.
Floats are written with Python's shortest round-trip repr, so parsing
the JSON gives back the same bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from scalaropt.critical import CriticalPoint, Extremum, MonotonicSegment
from scalaropt.optimize import MinimizeResult

REPORT_SCHEMA: dict[str, type | tuple[type, ...]] = {
    "command": str,
    "inputs": dict,
    "result": (dict, list),
    "warnings": list,
    "elapsed_ms": (int, float),
}

SOLVE_RESULT_SCHEMA: dict[str, type | tuple[type, ...]] = {
    "x": (int, float),
    "f": (int, float),
    "iterations": int,
    "evaluations": int,
    "converged": bool,
}

SOLVE_COMMANDS = frozenset({"minimize", "maximize"})


@dataclass
class RunReport:
    """Everything one CLI run reports, as written by ``--json``."""

    command: str
    inputs: dict
    result: dict | list
    warnings: list[str] = field(default_factory=list)
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "warnings": list(self.warnings),
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        """Indented JSON with a trailing newline."""
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def _type_errors(data: dict, schema: dict, where: str) -> list[str]:
    problems = []
    for key, expected in schema.items():
        if key not in data:
            problems.append(f"{where}: missing {key!r}")
            continue
        value = data[key]
        # bool is an int subclass; only accept it where bool is asked for
        if isinstance(value, bool) and expected is not bool:
            problems.append(f"{where}.{key}: expected number, got bool")
        elif not isinstance(value, expected):
            problems.append(f"{where}.{key}: unexpected type {type(value).__name__}")
    return problems


def validate_report(data: object) -> list[str]:
    """Check a decoded report against the published schema; returns problems found."""
    if not isinstance(data, dict):
        return ["report: not a JSON object"]
    problems = _type_errors(data, REPORT_SCHEMA, "report")
    if problems:
        return problems
    if not all(isinstance(w, str) for w in data["warnings"]):
        problems.append("report.warnings: every entry must be a string")
    if data["command"] in SOLVE_COMMANDS:
        if isinstance(data["result"], dict):
            problems += _type_errors(data["result"], SOLVE_RESULT_SCHEMA, "result")
        else:
            problems.append("result: expected an object")
    return problems


# ------------------------------------------------------------------
# Payload builders
# ------------------------------------------------------------------


def _identity(x: float) -> float:
    return x


def solve_payload(result: MinimizeResult, x_out=_identity) -> dict:
    return {
        "x": x_out(result.x_min),
        "f": result.f_min,
        "iterations": result.iterations,
        "evaluations": result.function_evaluations,
        "converged": result.converged,
        "bracket_width": result.final_bracket_width,
        "method": result.method.value,
    }


def critical_payload(point: CriticalPoint, x_out=_identity) -> dict:
    return {
        "x": x_out(point.x),
        "f": point.f_value,
        "kind": point.kind.value,
        "test": point.test_used.value,
        "residual": point.derivative_residual,
    }


def segment_payload(segment: MonotonicSegment, x_out=_identity) -> dict:
    return {
        "lo": x_out(segment.interval.lo),
        "hi": x_out(segment.interval.hi),
        "direction": None if segment.direction is None else segment.direction.value,
    }


def extremum_payload(extremum: Extremum, x_out=_identity) -> dict:
    return {"x": x_out(extremum.x), "f": extremum.f_value, "where": extremum.where}


def elapsed_ms(start: float, end: float) -> float:
    """Wall time in milliseconds, rounded to microseconds."""
    return round((end - start) * 1000.0, 3)
