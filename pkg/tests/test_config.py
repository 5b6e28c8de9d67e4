"""Tests for run configuration loading and report serialization."""

import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from stokes_unfold.config import RunConfig, load_run_config, parse_complex
from stokes_unfold.exceptions import ConfigurationError
from stokes_unfold.types import OutputFormat, SingularPoint
from stokes_unfold.utils import (
    SCHEMA_VERSION,
    atomic_write,
    parse_toml_safe,
    render_csv,
    render_json,
    to_jsonable,
)

# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """TOML file with a [params] table and a few settings."""
    path = tmp_path / "run.toml"
    path.write_text(
        'format = "csv"\n'
        "n_list = [2, 4]\n"
        "tol = 1e-9\n"
        "\n"
        "[params]\n"
        'beta2 = "2,0"\n'
        "gamma2 = [-2.0, 0.0]\n"
        "sqrt_eps = 0.25\n",
        encoding="utf-8",
    )
    return path


# ============================================================================
# Complex parsing
# ============================================================================


class TestParseComplex:
    """Tests for parse_complex."""

    @pytest.mark.parametrize(
        "value,expected",
        [
            ("1,2", 1 + 2j),
            (" -0.5 , 3 ", -0.5 + 3j),
            ("2.5", 2.5 + 0j),
            ("1+2j", 1 + 2j),
            ([1, -1], 1 - 1j),
            ((0.0, 4.0), 4j),
            (3, 3 + 0j),
            (1.5, 1.5 + 0j),
            (2j, 2j),
        ],
    )
    def test_accepted_shapes(self, value: object, expected: complex) -> None:
        """Test every accepted input shape."""
        assert parse_complex(value) == expected

    @pytest.mark.parametrize("value", [True, [1, 2, 3], "abc", None])
    def test_rejected_shapes(self, value: object) -> None:
        """Test booleans, wrong lengths and garbage are rejected."""
        with pytest.raises(ValueError):
            parse_complex(value)


# ============================================================================
# RunConfig
# ============================================================================


class TestRunConfig:
    """Tests for RunConfig and load_run_config."""

    def test_defaults(self) -> None:
        """Test the default run is case I with unit differences."""
        cfg = RunConfig()
        assert cfg.params().delta_beta == 1
        assert cfg.params().delta_gamma == 1
        assert cfg.epsilon().sqrt_eps == 0.5
        assert cfg.n_list == [2, 4, 8, 16, 32, 64]
        assert cfg.grid == 5
        assert cfg.general_params().alphas == (0, -2)
        assert cfg.format is OutputFormat.JSON

    def test_overrides_only(self) -> None:
        """Test overrides without a file."""
        cfg = load_run_config(None, {"beta2": "1,0", "gamma2": "1", "tol": None})
        assert cfg.params().delta_beta == 1 + 0j
        assert cfg.tol == 1e-8

    def test_file_with_params_table(self, config_file: Path) -> None:
        """Test values from the [params] table and the top level."""
        cfg = load_run_config(config_file)
        assert cfg.beta2 == 2
        assert cfg.gamma2 == -2
        assert cfg.sqrt_eps == 0.25
        assert cfg.n_list == [2, 4]
        assert cfg.tol == 1e-9
        assert cfg.format is OutputFormat.CSV

    def test_overrides_win_over_file(self, config_file: Path) -> None:
        """Test command-line values replace file values."""
        cfg = load_run_config(config_file, {"beta2": "3,1", "format": "json"})
        assert cfg.beta2 == 3 + 1j
        assert cfg.format is OutputFormat.JSON

    def test_n_list_string(self) -> None:
        """Test a comma-separated n_list."""
        assert load_run_config(None, {"n_list": "2, 4,8"}).n_list == [2, 4, 8]
        assert load_run_config(None, {"n_list": ""}).n_list == []

    def test_enum_fields(self) -> None:
        """Test singular points parse from their labels."""
        cfg = load_run_config(None, {"point": "RR", "compose": "LL"})
        assert cfg.point is SingularPoint.RR
        assert cfg.compose is SingularPoint.LL

    @pytest.mark.parametrize(
        "overrides",
        [
            {"tol": 0},
            {"tol": -1e-3},
            {"precision": 5},
            {"grid": 11},
            {"n_list": [0, 2]},
            {"beta1": "x,y"},
            {"format": "xml"},
            {"unknown_key": 1},
        ],
    )
    def test_invalid_values(self, overrides: dict[str, object]) -> None:
        """Test invalid settings raise ConfigurationError."""
        with pytest.raises(ConfigurationError, match="Invalid run configuration"):
            load_run_config(None, overrides)

    def test_error_names_the_file(self, tmp_path: Path) -> None:
        """Test the recovery suggestion points at the config file."""
        path = tmp_path / "bad.toml"
        path.write_text("tol = -1\n", encoding="utf-8")
        with pytest.raises(ConfigurationError) as exc_info:
            load_run_config(path)
        assert str(path) in exc_info.value.recovery_suggestion
        assert "tol" in exc_info.value.message

    def test_params_must_be_table(self, tmp_path: Path) -> None:
        """Test a scalar params key is refused."""
        path = tmp_path / "scalar.toml"
        path.write_text("params = 3\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_run_config(path)


# ============================================================================
# File operations
# ============================================================================


class TestFileOperations:
    """Tests for atomic_write and parse_toml_safe."""

    def test_atomic_write_creates_parents(self, tmp_path: Path) -> None:
        """Test the file appears with the exact content and no temp files remain."""
        target = tmp_path / "nested" / "out.json"
        atomic_write(target, '{"schema": 1}\n')
        assert target.read_text(encoding="utf-8") == '{"schema": 1}\n'
        assert [p.name for p in target.parent.iterdir()] == ["out.json"]

    def test_missing_file(self, tmp_path: Path) -> None:
        """Test a missing config file raises ConfigurationError."""
        with pytest.raises(ConfigurationError, match="not found"):
            parse_toml_safe(tmp_path / "absent.toml")

    def test_invalid_toml(self, tmp_path: Path) -> None:
        """Test malformed TOML raises ConfigurationError."""
        path = tmp_path / "broken.toml"
        path.write_text("tol = = 1\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Invalid TOML"):
            parse_toml_safe(path)

    def test_empty_file(self, tmp_path: Path) -> None:
        """Test an empty file parses to an empty dict."""
        path = tmp_path / "empty.toml"
        path.write_bytes(b"")
        assert parse_toml_safe(path) == {}


# ============================================================================
# Serialization
# ============================================================================


class TestSerialization:
    """Tests for to_jsonable, render_json and render_csv."""

    def test_to_jsonable(self) -> None:
        """Test complex numbers, arrays, enums and non-finite floats."""
        data = {
            "mu": 1 - 2j,
            "matrix": np.eye(2, dtype=np.complex128),
            "point": SingularPoint.L,
            "bad": float("nan"),
            "flag": np.bool_(True),
        }
        out = to_jsonable(data)
        assert out["mu"] == {"re": 1.0, "im": -2.0}
        assert out["matrix"][0][0] == {"re": 1.0, "im": 0.0}
        assert out["point"] == "L"
        assert out["bad"] is None
        assert out["flag"] is True

    def test_render_json_key_order(self) -> None:
        """Test schema and command come first and the timestamp is optional."""
        text = render_json("stokes", {"S": -0.5}, timestamp=False)
        document = json.loads(text)
        assert list(document) == ["schema", "command", "S"]
        assert document["schema"] == SCHEMA_VERSION
        assert text.endswith("\n")
        assert "generated_at" in json.loads(render_json("stokes", {}))

    def test_render_csv(self) -> None:
        """Test the header row comes first and complex cells stay in one column."""
        text = render_csv(["k", "value"], [[1, 0.5 + 1j]])
        lines = text.splitlines()
        assert lines[0] == "k,value"
        assert lines[1] == '1,"0.5,1.0"'
        assert "generated_at" not in text
        rows = list(csv.DictReader(io.StringIO(text)))
        assert rows == [{"k": "1", "value": "0.5,1.0"}]
