"""Run configuration for the command-line tools.

A RunConfig is assembled from an optional TOML file and command-line
overrides, and validated once before any computation starts.

Design Philosophy:
- Validate at the boundary, then pass typed values inward
- Complex inputs accepted as "re,im" strings, [re, im] pairs or bare numbers
- Configuration problems surface as ConfigurationError with a suggestion

Example:
    >>> cfg = load_run_config(None, {"beta2": "1,0", "gamma2": "1"})
    >>> cfg.params().delta_beta
    (1+0j)
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .exceptions import ConfigurationError
from .types import (
    Epsilon,
    GeneralParams,
    OutputFormat,
    Params,
    Q41Reading,
    SingularPoint,
)
from .utils import parse_toml_safe

logger = logging.getLogger(__name__)

DEFAULT_N_LIST = [2, 4, 8, 16, 32, 64]


def parse_complex(value: Any) -> complex:
    """Parse "re,im", "re", [re, im], (re, im) or a number into a complex.

    Raises:
        ValueError: If the value has none of these shapes
    """
    if isinstance(value, complex):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not complex numbers")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"expected [re, im], got {len(value)} items")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.strip()
        if "," in text:
            re_text, im_text = text.split(",", 1)
            return complex(float(re_text), float(im_text))
        try:
            return complex(float(text))
        except ValueError:
            return complex(text.replace(" ", ""))
    raise ValueError(f"cannot read a complex number from {value!r}")


class RunConfig(BaseModel):
    """Validated settings of one CLI run.

    Attributes:
        beta1, beta2, gamma1, gamma2: Equation parameters
        alpha1, alpha2: Extra parameters of the six-parameter family (classify)
        sqrt_eps: Square root of the perturbation parameter
        tol: Closed form vs oracle tolerance
        quad_tol: Quadrature tolerance
        threshold: Relative convergence threshold of the limit experiment
        precision: mpmath working precision in decimal digits
        eps_angle: Angular offset of the two rays in the jump check
        grid: Largest n_beta and n_gamma of the oracle sweep
        n_list: n values with sqrt(eps) = 1/n for the convergence experiment
        order: Number of series coefficients
        x: Evaluation point (borel)
        theta: Summation direction (borel)
        point: Singular point to encircle (monodromy)
        compose: Second point for a composed loop (monodromy)
        reading: Reading of the q41/q51 entries (classify)
        format: Output format
        out: Output file, stdout when unset
        timestamp: Emit the generated_at stamp
    """

    model_config = ConfigDict(extra="forbid")

    beta1: complex = 0j
    beta2: complex = 1 + 0j
    gamma1: complex = 0j
    gamma2: complex = 1 + 0j
    alpha1: complex = 0j
    alpha2: complex = -2 + 0j
    sqrt_eps: complex = 0.5 + 0j
    tol: float = Field(default=1e-8, gt=0)
    quad_tol: float = Field(default=1e-6, gt=0)
    threshold: float = Field(default=5e-2, gt=0)
    precision: int = Field(default=30, ge=15, le=200)
    eps_angle: float = Field(default=0.05, gt=0, lt=1.5)
    grid: int = Field(default=5, ge=1, le=10)
    n_list: list[int] = Field(default_factory=lambda: list(DEFAULT_N_LIST))
    order: int = Field(default=10, ge=1, le=500)
    x: complex | None = None
    theta: float | None = None
    point: SingularPoint = SingularPoint.L
    compose: SingularPoint | None = None
    reading: Q41Reading = Q41Reading.ALPHA1_ALPHA2
    format: OutputFormat = OutputFormat.JSON
    out: Path | None = None
    timestamp: bool = True

    @field_validator(
        "beta1", "beta2", "gamma1", "gamma2", "alpha1", "alpha2", "sqrt_eps", "x", mode="before"
    )
    @classmethod
    def _complex_field(cls, value: Any) -> Any:
        if value is None:
            return None
        return parse_complex(value)

    @field_validator("n_list", mode="before")
    @classmethod
    def _n_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [int(part) for part in value.replace(" ", "").split(",") if part]
        return value

    @field_validator("n_list")
    @classmethod
    def _positive_n(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("n_list entries must be >= 1")
        return value

    def params(self) -> Params:
        """The four-parameter case I family."""
        return Params(self.beta1, self.beta2, self.gamma1, self.gamma2)

    def general_params(self) -> GeneralParams:
        return GeneralParams(
            self.alpha1, self.alpha2, self.beta1, self.beta2, self.gamma1, self.gamma2
        )

    def epsilon(self) -> Epsilon:
        return Epsilon(self.sqrt_eps)


def _flatten(data: dict[str, Any]) -> dict[str, Any]:
    """Merge an optional [params] table into the top level."""
    flat = {k: v for k, v in data.items() if k != "params"}
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ConfigurationError("[params] must be a table")
    flat.update(params)
    return flat


def load_run_config(path: Path | None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Build a RunConfig from an optional TOML file plus overrides.

    Overrides with value None are ignored, so argparse defaults never mask
    values from the file.

    Raises:
        ConfigurationError: If the file is unreadable or any value is invalid
    """
    data: dict[str, Any] = {}
    if path is not None:
        data = _flatten(parse_toml_safe(path))
        logger.debug(f"Loaded {len(data)} settings from {path}")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(
            f"Invalid run configuration: {problems}", config_path=str(path or "")
        ) from e
