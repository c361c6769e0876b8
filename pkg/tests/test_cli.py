"""End-to-end tests for the command-line interface."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from unittest.mock import patch

import pytest

from scalaropt.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, run
from scalaropt.main import main
from scalaropt.report import validate_report

SQRT_30 = math.sqrt(30)
ALPHA_STAR = math.atan(0.5 ** (1 / 3))
L_STAR = (3 ** (2 / 3) + 6 ** (2 / 3)) ** 1.5


def _json(capsys: pytest.CaptureFixture[str], argv: list[str]) -> dict:
    assert run(argv) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert validate_report(data) == []
    return data


# ------------------------------------------------------------------
# minimize / maximize
# ------------------------------------------------------------------

def test_minimize_pipe_json(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["minimize", "3/sin(x)+6/cos(x)", "--lo", "1e-6", "--hi", "1.5707", "--json"])
    assert data["command"] == "minimize"
    assert data["result"]["x"] == pytest.approx(ALPHA_STAR, abs=1e-6)
    assert data["result"]["f"] == pytest.approx(L_STAR, abs=1e-6)
    assert data["inputs"]["expression"] == "3/sin(x)+6/cos(x)"
    assert data["warnings"] == []


def test_minimize_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["minimize", "(x-2)^2", "--lo", "0", "--hi", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("x = 2, f(x) = ")
    assert "brent" in out and "converged" in out


def test_minimize_golden(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["minimize", "(x-2)^2", "--lo", "0", "--hi", "5", "--method", "golden", "--json"])
    assert data["result"]["method"] == "golden"
    assert data["result"]["x"] == pytest.approx(2.0, abs=1e-7)


def test_maximize_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["maximize", "sin(x)", "--lo", "0", "--hi", "3.14159"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("x = 1.5708, f(x) = 1 ")


def test_degrees_in_and_out(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["minimize", "cos(x)", "--lo", "90", "--hi", "270", "--degrees", "--json"])
    assert data["result"]["x"] == pytest.approx(180.0, abs=1e-4)
    assert data["inputs"]["lo"] == pytest.approx(90.0)
    assert data["inputs"]["degrees"] is True


def test_start_point_brackets_first(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["minimize", "(x-2)^2", "--x0", "0", "--step", "0.1", "--json"])
    assert data["result"]["x"] == pytest.approx(2.0, abs=1e-7)
    assert data["inputs"]["lo"] < 2.0 < data["inputs"]["hi"]


def test_start_point_for_maximize(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["maximize", "-(x-1)^2", "--x0", "-2", "--json"])
    assert data["result"]["x"] == pytest.approx(1.0, abs=1e-7)


def test_leading_minus_expression(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["maximize", "--lo", "-3", "--hi", "3", "--json", "--", "-(x-1)^2"])
    assert data["result"]["x"] == pytest.approx(1.0, abs=1e-7)
    assert data["result"]["f"] == pytest.approx(0.0, abs=1e-12)


def test_max_iterations_warning_in_report(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["minimize", "(x-2)^2", "--lo", "0", "--hi", "5", "--max-iter", "2", "--json"])
    assert data["result"]["converged"] is False
    assert len(data["warnings"]) == 1
    assert "2 iterations" in data["warnings"][0]


def test_no_timing_is_reproducible(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["minimize", "3*csc(x)+6*sec(x)", "--lo", "0.01", "--hi", "1.56", "--json", "--no-timing"]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["elapsed_ms"] == 0.0


# ------------------------------------------------------------------
# critical-points / monotonic / extrema
# ------------------------------------------------------------------

def test_critical_points_json(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["critical-points", "sin(x)", "--lo", "0", "--hi", repr(2 * math.pi), "--json"])
    assert [p["kind"] for p in data["result"]] == ["LocalMax", "LocalMin"]
    assert data["result"][0]["x"] == pytest.approx(math.pi / 2, abs=1e-9)
    assert data["inputs"]["grid"] == 1001


def test_critical_points_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["critical-points", "3*csc(x)+6*sec(x)", "--lo", "0.01", "--hi", "1.56"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out == "x = 0.670888, f = 12.4858: LocalMin (SecondDerivative test)\n"


def test_critical_points_none(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["critical-points", "5", "--lo", "0", "--hi", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "no critical points\n"


def test_monotonic_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["monotonic", "x^2", "--lo", "-1", "--hi", "1", "--grid", "101"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[0].endswith("Decreasing")
    assert lines[1].endswith("Increasing")


def test_monotonic_unlabeled_warns_on_stderr(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["monotonic", "7 + 0*x", "--lo", "0", "--hi", "1"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.strip().endswith("unlabeled")
    assert captured.err.startswith("warning: ")


def test_extrema_json(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["extrema", "x^3 - 3*x", "--lo", "-3", "--hi", "1.9", "--json"])
    assert data["result"]["min"] == {"x": -3.0, "f": -18.0, "where": "endpoint"}
    assert data["result"]["max"]["x"] == pytest.approx(-1.0, abs=1e-9)
    assert data["result"]["max"]["where"] == "interior"


# ------------------------------------------------------------------
# model
# ------------------------------------------------------------------

_PIPE_LINE = re.compile(r"alpha\* = (\d+\.\d{6}) rad \((\d+\.\d{3}) deg\), L\* = (\d+\.\d{6})\n")


def test_model_pipe_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["model", "pipe", "--a", "3", "--b", "6"]) == EXIT_OK
    match = _PIPE_LINE.fullmatch(capsys.readouterr().out)
    assert match is not None
    alpha, degrees, length = (float(g) for g in match.groups())
    assert alpha == pytest.approx(ALPHA_STAR, abs=1e-6)
    assert degrees == pytest.approx(math.degrees(ALPHA_STAR), abs=1e-3)
    assert length == pytest.approx(L_STAR, abs=1e-6)


def test_model_pipe_json(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["model", "pipe", "--json"])
    result = data["result"]
    assert result["length"] == pytest.approx(result["closed_form"]["length"], rel=1e-6)
    assert result["alpha"] == pytest.approx(result["closed_form"]["alpha"], abs=1e-6)


def test_model_pipe_plot(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "pipe.svg"
    data = _json(capsys, ["model", "pipe", "--plot", str(out), "--json"])
    svg = out.read_text()
    assert svg.startswith("<svg")
    assert svg.count('<g id="marker0">') == 1
    assert data["result"]["plot"]["format"] == "svg"


def test_model_cinema_json(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["model", "cinema", "--top", "10", "--bottom", "3", "--json"])
    assert data["result"]["x"] == pytest.approx(SQRT_30, rel=1e-6)
    expected = math.atan(math.sqrt(10 / 3)) - math.atan(math.sqrt(3 / 10))
    assert data["result"]["theta"] == pytest.approx(expected, abs=1e-6)


def test_model_cinema_boundary_warning(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["model", "cinema", "--bottom", "0", "--json"])
    assert len(data["warnings"]) == 1
    assert "eye level" in data["warnings"][0]


def test_model_requires_kind(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["model"]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error: ")


def test_model_rejects_bad_parameters(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["model", "cinema", "--top", "1", "--bottom", "3"]) == EXIT_USAGE
    assert "bottom < top" in capsys.readouterr().err


# ------------------------------------------------------------------
# plot
# ------------------------------------------------------------------

def test_plot_csv_to_stdout(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["plot", "csc(x)", "--lo", "0", "--hi", "1", "--samples", "11"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y"
    assert lines[1] == "0.0,"
    assert len(lines) == 12


def test_plot_svg_file_with_minimum(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "pipe.svg"
    argv = ["plot", "3*csc(x)+6*sec(x)", "--lo", "0.05", "--hi", "1.52", "--out", str(out), "--mark-min"]
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out.startswith(f"wrote {out}")
    svg = out.read_text()
    assert svg.count('<g id="marker0">') == 1
    assert "min 12.4858" in svg


def test_plot_png_file(tmp_path: Path) -> None:
    out = tmp_path / "sine.png"
    assert run(["plot", "sin(x)", "--lo", "0", "--hi", "6", "--out", str(out)]) == EXIT_OK
    assert out.read_bytes().startswith(b"\x89PNG")


def test_plot_png_needs_a_file(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["plot", "x", "--lo", "0", "--hi", "1", "--format", "png"]) == EXIT_USAGE
    assert "--out" in capsys.readouterr().err


def test_plot_unknown_extension(tmp_path: Path) -> None:
    assert run(["plot", "x", "--lo", "0", "--hi", "1", "--out", str(tmp_path / "plot.txt")]) == EXIT_USAGE


def test_plot_all_faulting_is_solver_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["plot", "ln(-1 - x^2)", "--lo", "0", "--hi", "1"]) == EXIT_SOLVER
    assert capsys.readouterr().err.startswith("error: ")


# ------------------------------------------------------------------
# Errors and exit codes
# ------------------------------------------------------------------

def test_parse_error_exit_code(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["minimize", "3 +", "--lo", "0", "--hi", "1"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert err.startswith("error: expected ")
    assert "offset 3" in err


def test_unknown_identifier_exit_code(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["minimize", "y^2", "--lo", "0", "--hi", "1"]) == EXIT_USAGE
    assert "unknown identifier 'y'" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["minimize", "x^2"],
        ["minimize", "x^2", "--lo", "1", "--hi", "0"],
        ["minimize", "x^2", "--lo", "0", "--hi", "1", "--x0", "0.5"],
        ["minimize", "x^2", "--lo", "0", "--hi", "1", "--tol", "0"],
        ["minimize", "x^2", "--lo", "0", "--hi", "1", "--method", "newton"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    assert run(argv) == EXIT_USAGE
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert len(err.strip().splitlines()) == 1


def test_no_evaluable_point_exit_code(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["minimize", "sqrt(-1 - x^2)", "--lo", "0", "--hi", "1"]) == EXIT_SOLVER
    assert "probes faulted" in capsys.readouterr().err


def test_bracket_failure_exit_code() -> None:
    assert run(["minimize", "exp(x)", "--x0", "0"]) == EXIT_SOLVER


def test_help_exits_cleanly(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["--help"]) == EXIT_OK
    assert "minimize" in capsys.readouterr().out


# ------------------------------------------------------------------
# settings
# ------------------------------------------------------------------

def test_settings_set_persists_and_applies(isolated_settings: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["settings", "--set", "method=golden", "--set", "grid_points=501"]) == EXIT_OK
    assert json.loads(isolated_settings.read_text())["grid_points"] == 501
    capsys.readouterr()

    data = _json(capsys, ["minimize", "(x-2)^2", "--lo", "0", "--hi", "5", "--json"])
    assert data["result"]["method"] == "golden"

    data = _json(capsys, ["critical-points", "x^2", "--lo", "-1", "--hi", "1", "--json"])
    assert data["inputs"]["grid"] == 501


def test_settings_flags_override_saved_defaults(capsys: pytest.CaptureFixture[str]) -> None:
    assert run(["settings", "--set", "method=golden"]) == EXIT_OK
    capsys.readouterr()
    data = _json(capsys, ["minimize", "(x-2)^2", "--lo", "0", "--hi", "5", "--method", "brent", "--json"])
    assert data["result"]["method"] == "brent"


def test_settings_show(capsys: pytest.CaptureFixture[str]) -> None:
    data = _json(capsys, ["settings", "--json"])
    assert data["result"]["x_tolerance"] == 1e-8
    assert data["result"]["pipe_b"] == 6.0


def test_settings_reset(isolated_settings: Path) -> None:
    assert run(["settings", "--set", "samples=64"]) == EXIT_OK
    assert isolated_settings.exists()
    assert run(["settings", "--reset"]) == EXIT_OK
    assert not isolated_settings.exists()


@pytest.mark.parametrize("assignment", ["grid_points=abc", "method=newton", "grid_points=1", "nope=1"])
def test_settings_rejects_bad_values(isolated_settings: Path, assignment: str) -> None:
    assert run(["settings", "--set", assignment]) == EXIT_USAGE
    assert not isolated_settings.exists()


# ------------------------------------------------------------------
# Entry point
# ------------------------------------------------------------------

def test_main_exits_with_run_status(capsys: pytest.CaptureFixture[str]) -> None:
    with patch("sys.argv", ["scalaropt", "model", "pipe"]), pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == EXIT_OK
    assert capsys.readouterr().out.startswith("alpha* = ")
