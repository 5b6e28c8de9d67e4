"""Tests for the stokes-unfold command-line interface."""

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any
from unittest.mock import patch

import pytest

from stokes_unfold import __version__
from stokes_unfold.cli import COMMANDS, build_parser, main

# ============================================================================
# Helpers
# ============================================================================


def run(argv: list[str]) -> int:
    """Parse argv and dispatch to the subcommand handler."""
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


def run_json(argv: list[str], capsys: pytest.CaptureFixture[str]) -> tuple[int, dict[str, Any]]:
    """Run a subcommand without timestamp and parse its JSON report."""
    code = run([*argv, "--no-timestamp"])
    return code, json.loads(capsys.readouterr().out)


GENERIC = ["--beta1=0.3,-0.1", "--beta2", "1.2,0.4", "--gamma1", "0,0.2", "--gamma2=0.5,-0.3"]

# ============================================================================
# Entry point
# ============================================================================


class TestMain:
    """Tests for main() and argument parsing."""

    def test_no_command_prints_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test running without a subcommand shows help and exits 0."""
        with patch.object(sys, "argv", ["stokes-unfold"]):
            with pytest.raises(SystemExit) as exc_info:
                main()
        assert exc_info.value.code == 0
        assert "oracle-check" in capsys.readouterr().out

    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test --version prints the package version."""
        with patch.object(sys, "argv", ["stokes-unfold", "--version"]):
            with pytest.raises(SystemExit) as exc_info:
                main()
        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_main_exit_code(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test main exits with the handler's code."""
        with patch.object(sys, "argv", ["stokes-unfold", "stokes", "--no-timestamp"]):
            with pytest.raises(SystemExit) as exc_info:
                main()
        assert exc_info.value.code == 0
        assert json.loads(capsys.readouterr().out)["command"] == "stokes"

    def test_all_commands_registered(self) -> None:
        """Test every subcommand has a handler."""
        assert set(COMMANDS) == {
            "stokes", "series", "borel", "unfold",
            "converge", "classify", "oracle-check", "monodromy",
        }  # fmt: skip

    def test_unknown_format_is_usage_error(self) -> None:
        """Test argparse rejects an unknown output format with exit code 2."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["stokes", "--format", "xml"])
        assert exc_info.value.code == 2


# ============================================================================
# Reports
# ============================================================================


class TestStokesCommand:
    """Tests for the stokes subcommand."""

    def test_default_report(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test S = -J_1(2) and the antisymmetry check."""
        code, report = run_json(["stokes"], capsys)
        assert code == 0
        assert report["passed"] is True
        assert "generated_at" not in report
        assert report["S"]["re"] == pytest.approx(-0.5767248077568734)
        assert report["origin"]["mu"]["im"] == pytest.approx(-report["infinity"]["mu"]["im"])

    def test_equal_gammas(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test gamma1 == gamma2 reports identity matrices and no direction at infinity."""
        code, report = run_json(["stokes", "--gamma1", "0.5", "--gamma2", "0.5"], capsys)
        assert code == 0
        one, zero = {"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}
        identity = [[one, zero], [zero, one]]
        assert report["infinity"]["matrix"] == identity
        assert report["infinity"]["theta"] is None
        assert report["origin"]["matrix"] == identity
        assert any("gamma1 == gamma2" in note for note in report["notes"])

    def test_csv_key_value_rows(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test CSV output of a report without a table."""
        assert run(["stokes", "--format", "csv", "--no-timestamp"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "key,value"
        assert lines[1] == "passed,True"

    def test_out_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test --out writes the report and leaves stdout empty."""
        target = tmp_path / "stokes.json"
        assert run(["stokes", "--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        report = json.loads(target.read_text(encoding="utf-8"))
        assert report["schema"] == 1
        assert "generated_at" in report

    def test_invalid_value_exits_2(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a validation error is reported on stderr with exit code 2."""
        assert run(["stokes", "--tol=-1"]) == 2
        assert "Invalid run configuration" in capsys.readouterr().err

    def test_config_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test parameters come from a TOML file."""
        path = tmp_path / "run.toml"
        path.write_text('[params]\nbeta2 = "2,0"\n', encoding="utf-8")
        code, report = run_json(["stokes", "--config", str(path)], capsys)
        assert code == 0
        assert report["params"]["beta2"] == {"re": 2.0, "im": 0.0}


class TestSeriesCommand:
    """Tests for the series subcommand."""

    def test_c_k_identity(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the c_k identity holds for the requested order."""
        code, report = run_json(["series", "--order", "12"], capsys)
        assert code == 0
        assert len(report["psi_hat"]["values"]) == 12
        assert report["c_k_max_rel_err"] < 1e-8

    def test_csv_table(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the CSV header of the coefficient table."""
        assert run(["series", "--order", "3", "--format", "csv", "--no-timestamp"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "k,psi_hat,phi_hat,c_k,rel_err"
        assert len(lines) == 4


class TestBorelCommand:
    """Tests for the borel subcommand."""

    def test_jump(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the Stokes jump passes at the default point."""
        code, report = run_json(["borel"], capsys)
        assert code == 0
        assert report["jump"]["rel_err"] < 1e-6


class TestUnfoldCommand:
    """Tests for the unfold subcommand."""

    def test_default_resonance(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test unit differences at sqrt(eps) = 1/2 are resonance A2 (1, 1)."""
        code, report = run_json(["unfold"], capsys)
        assert code == 0
        assert report["resonance"] == {"kind": "A2", "n_beta": 1, "n_gamma": 1}
        assert [d["point"] for d in report["decompositions"]] == ["R", "L", "RR", "LL"]

    def test_no_resonance_exits_2(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test non-resonant parameters are an error."""
        assert run(["unfold", "--sqrt-eps", "0.3"]) == 2
        assert "not in double resonance" in capsys.readouterr().err


class TestConvergeCommand:
    """Tests for the converge subcommand."""

    def test_case_three_sweep(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the default n list converges for db = 2, dg = -2."""
        code, report = run_json(["converge", "--beta2", "2", "--gamma2=-2"], capsys)
        assert code == 0
        assert report["table"]["case"] == 3
        assert len(report["table"]["rows"]) == 12

    def test_csv_header(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the CSV table is written even when a short sweep misses the threshold."""
        argv = ["converge", "--beta2", "2", "--gamma2=-2", "--n-list", "2,4"]
        assert run([*argv, "--format", "csv"]) == 1
        captured = capsys.readouterr()
        lines = captured.out.splitlines()
        assert lines[0] == "n,point,sqrt_eps,re_d,im_d,abs_err"
        assert len(lines) == 5
        assert "CHECK FAILED: converge" in captured.err

    def test_csv_passing_sweep(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a sweep reaching n = 64 passes and parses with DictReader."""
        argv = ["converge", "--beta2", "2", "--gamma2=-2", "--n-list", "2,4,8,16,32,64"]
        assert run([*argv, "--format", "csv"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 12
        assert [row["n"] for row in rows[:2]] == ["2", "2"]

    def test_empty_n_list_exits_2(self) -> None:
        """Test an empty n list is a usage error."""
        assert run(["converge", "--n-list="]) == 2

    def test_missed_threshold_exits_1(self) -> None:
        """Test a failed convergence check exits 1."""
        argv = ["converge", "--beta2", "2", "--gamma2=-2", "--n-list", "2,4", "--threshold", "1e-9"]
        assert run(argv) == 1


class TestClassifyCommand:
    """Tests for the classify subcommand."""

    def test_case_one(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test generic case I parameters leave the four finite points singular."""
        code, report = run_json(["classify", *GENERIC], capsys)
        assert code == 0
        assert report["summary"] == "case I, singular: {t2, t3, t4, t5}"
        assert report["report"]["consistent"] is True

    def test_no_case(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test generic alphas match no family."""
        code, report = run_json(["classify", *GENERIC, "--alpha1", "0.3", "--alpha2=-1.1"], capsys)
        assert code == 0
        assert report["summary"] == "no case, 5 singular points"


class TestOracleCheckCommand:
    """Tests for the oracle-check subcommand."""

    def test_small_grid(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test closed forms agree with contour residues on a 1 x 2 grid."""
        code, report = run_json(["oracle-check", "--grid", "1"], capsys)
        assert code == 0
        assert report["skipped"] is None
        assert len(report["rows"]) == 16

    def test_default_grid(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the default sweep covers n_beta in 1..5 and n_gamma in 0..5 for all types."""
        code, report = run_json(["oracle-check"], capsys)
        assert code == 0
        assert report["grid"] == 5
        assert len(report["rows"]) == 4 * 5 * 6 * 2
        assert report["max_rel_err"] < 1e-8
        assert all(row["passed"] for row in report["rows"])

    def test_complex_eps_is_skipped(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a non-real sqrt(eps) skips the sweep with a reason."""
        code, report = run_json(["oracle-check", "--sqrt-eps", "0,0.5"], capsys)
        assert code == 0
        assert report["rows"] == []
        assert "positive real axis" in report["skipped"]


class TestMonodromyCommand:
    """Tests for the monodromy subcommand."""

    def test_default_point(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test ODE monodromy around L matches the closed form."""
        code, report = run_json(["monodromy"], capsys)
        assert code == 0
        assert report["point"] == "L"
        assert report["checks"]["closed_form"] < 1e-6

    def test_composed_loop(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the composition law for loops around L then RR."""
        code, report = run_json(["monodromy", "--compose", "RR"], capsys)
        assert code == 0
        assert report["checks"]["composition"] < 1e-6

