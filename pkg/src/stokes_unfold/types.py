"""Type definitions for stokes-unfold.

This module provides the shared enums and immutable value types: equation
parameters, the perturbation parameter, singular points, characteristic
exponents, resonance data and Stokes matrices.

Design Philosophy:
- Use Python 3.10+ syntax (list[str], dict[str, Any], complex | None)
- 100% type coverage for mypy --strict
- Immutable dataclasses where possible (frozen=True)
- Complex inputs are coerced once, in __post_init__
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from .exceptions import InvalidParametersError

Matrix2C = npt.NDArray[np.complex128]
"""A 2x2 complex matrix (Stokes, monodromy and nilpotent factors)."""

# ============================================================================
# Core Enums
# ============================================================================


class SingularPoint(str, Enum):
    """Finite singular points of the perturbed equation.

    - R: x = sqrt(eps)
    - L: x = -sqrt(eps)
    - RR: x = 1/sqrt(eps)
    - LL: x = -1/sqrt(eps)
    """

    R = "R"
    L = "L"
    RR = "RR"
    LL = "LL"


class ResonanceKind(str, Enum):
    """Double-resonance types of the perturbed equation.

    Each type has one logarithmic point near the origin and one near infinity:
    A1 -> (L, LL), A2 -> (L, RR), A3 -> (R, LL), A4 -> (R, RR).
    """

    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    NONE = "none"


class Frame(str, Enum):
    """Which irregular point a fundamental solution is attached to."""

    ORIGIN = "origin"
    INFINITY = "infinity"


class Symmetry(str, Enum):
    """Coordinate changes that map the equation family into itself."""

    IDENTITY = "identity"
    INVERSION = "inversion"  # x -> 1/x
    NEGATIVE_INVERSION = "negative_inversion"  # x -> -1/x
    REFLECTION = "reflection"  # x -> -x


class HeunCase(str, Enum):
    """The eight parameter families with exactly four singular points."""

    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"


class SeriesKind(str, Enum):
    """Formal coefficient sequences attached to the initial equation."""

    PSI_HAT = "psi_hat"
    PHI_HAT = "phi_hat"
    A_K = "a_k"
    C_K = "c_k"


class LaplaceForm(str, Enum):
    """Normalization of a ray Laplace transform.

    - ORIGIN: integral of f(z) exp(-z/x) d(z/x), for series in powers of x
    - INFINITY: integral of f(p) exp(-x p) dp, for series in powers of 1/x
    """

    ORIGIN = "origin"
    INFINITY = "infinity"


class SummationMethod(str, Enum):
    """How a 1-sum was evaluated."""

    LAPLACE = "laplace"
    SERIES = "series"


class Q41Reading(str, Enum):
    """Readings of the product term in the displayed q41/q51 coefficients."""

    ALPHA1_ALPHA2 = "alpha1_alpha2"
    ALPHA1_ALPHA1 = "alpha1_alpha1"


class OutputFormat(str, Enum):
    """Report serialization formats of the CLI."""

    JSON = "json"
    CSV = "csv"


# ============================================================================
# Parameters
# ============================================================================


def _coerce(value: Any) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidParametersError(f"Parameter must be finite, got {value!r}")
    return z


@dataclass(frozen=True)
class GeneralParams:
    """All six coefficients of the factorized operators.

    L_j = d/dx - (alpha_j/x + beta_j/x^2 + gamma_j) for the initial equation.

    Attributes:
        alpha1, alpha2: Fuchsian parts
        beta1, beta2: Irregular parts at the origin
        gamma1, gamma2: Irregular parts at infinity
    """

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex
    gamma1: complex
    gamma2: complex

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))

    @property
    def alphas(self) -> tuple[complex, complex]:
        return (self.alpha1, self.alpha2)

    @property
    def betas(self) -> tuple[complex, complex]:
        return (self.beta1, self.beta2)

    @property
    def gammas(self) -> tuple[complex, complex]:
        return (self.gamma1, self.gamma2)

    def triple(self, j: int) -> tuple[complex, complex, complex]:
        """(alpha_j, beta_j, gamma_j) of L_j."""
        if j == 1:
            return (self.alpha1, self.beta1, self.gamma1)
        return (self.alpha2, self.beta2, self.gamma2)

    def is_close(self, other: GeneralParams, tol: float = 1e-12) -> bool:
        """Componentwise comparison with a relative tolerance."""
        mine = (*self.alphas, *self.betas, *self.gammas)
        theirs = (*other.alphas, *other.betas, *other.gammas)
        return all(abs(a - b) <= tol * max(1.0, abs(a), abs(b)) for a, b in zip(mine, theirs))

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
        }


@dataclass(frozen=True)
class Params:
    """Parameters of the initial equation with alpha1 = 0, alpha2 = -2.

    Attributes:
        beta1, beta2: Irregular parts at the origin (must differ)
        gamma1, gamma2: Irregular parts at infinity

    Example:
        >>> p = Params(beta1=0, beta2=1, gamma1=0, gamma2=1)
        >>> p.delta_beta
        (1+0j)
    """

    beta1: complex
    beta2: complex
    gamma1: complex
    gamma2: complex

    ALPHA1 = 0j
    ALPHA2 = -2 + 0j

    def __post_init__(self) -> None:
        for name in ("beta1", "beta2", "gamma1", "gamma2"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))
        scale = max(1.0, abs(self.beta1), abs(self.beta2))
        if abs(self.beta2 - self.beta1) <= 1e-14 * scale:
            raise InvalidParametersError(
                "beta1 must differ from beta2",
                recovery_suggestion="The resonant irregular case beta1 == beta2 is not covered",
            )

    @property
    def delta_beta(self) -> complex:
        """beta2 - beta1."""
        return self.beta2 - self.beta1

    @property
    def delta_gamma(self) -> complex:
        """gamma2 - gamma1."""
        return self.gamma2 - self.gamma1

    @property
    def gammas_equal(self) -> bool:
        return self.gamma1 == self.gamma2

    def general(self) -> GeneralParams:
        """Lift to the six-parameter family."""
        return GeneralParams(
            self.ALPHA1, self.ALPHA2, self.beta1, self.beta2, self.gamma1, self.gamma2
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "beta1": self.beta1,
            "beta2": self.beta2,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
        }


@dataclass(frozen=True)
class SingularPoints:
    """The four finite singular points of the perturbed equation.

    Attributes:
        xR, xL: +-sqrt(eps)
        xRR, xLL: +-1/sqrt(eps)
    """

    xR: complex  # noqa: N815
    xL: complex  # noqa: N815
    xRR: complex  # noqa: N815
    xLL: complex  # noqa: N815

    def at(self, point: SingularPoint) -> complex:
        """Location of a named singular point."""
        return {
            SingularPoint.R: self.xR,
            SingularPoint.L: self.xL,
            SingularPoint.RR: self.xRR,
            SingularPoint.LL: self.xLL,
        }[point]

    def items(self) -> list[tuple[SingularPoint, complex]]:
        return [(pt, self.at(pt)) for pt in SingularPoint]

    def nearest_gap(self, point: SingularPoint) -> float:
        """Distance from a singular point to the closest other one."""
        here = self.at(point)
        return min(abs(here - x) for pt, x in self.items() if pt != point)

    def min_pairwise_distance(self) -> float:
        return min(self.nearest_gap(pt) for pt in SingularPoint)


@dataclass(frozen=True)
class Epsilon:
    """The perturbation parameter, stored through sqrt(eps).

    The equation depends on eps only, so sqrt(eps) is normalized to
    arg in (-pi/2, pi/2] on construction.

    Attributes:
        sqrt_eps: Normalized square root of eps

    Example:
        >>> Epsilon(-0.5).sqrt_eps
        (0.5+0j)
    """

    sqrt_eps: complex

    def __post_init__(self) -> None:
        s = _coerce(self.sqrt_eps)
        if s == 0:
            raise InvalidParametersError("sqrt_eps must be non-zero")
        if s.real < 0 or (s.real == 0 and s.imag < 0):
            s = -s
        object.__setattr__(self, "sqrt_eps", s)

    @classmethod
    def from_eps(cls, eps: complex) -> Epsilon:
        """Build from eps itself (principal square root)."""
        return cls(cmath.sqrt(complex(eps)))

    @property
    def eps(self) -> complex:
        return self.sqrt_eps * self.sqrt_eps

    @property
    def points(self) -> SingularPoints:
        s = self.sqrt_eps
        return SingularPoints(xR=s, xL=-s, xRR=1 / s, xLL=-1 / s)

    def is_real_positive(self, tol: float = 1e-12) -> bool:
        """True when eps lies on the positive real axis."""
        return abs(self.sqrt_eps.imag) <= tol * abs(self.sqrt_eps)

    def require_regular(self) -> None:
        """Reject eps**2 == 1, where the pairs of singular points collide.

        Raises:
            InvalidParametersError: If eps**2 is 1 within rounding
        """
        if abs(self.eps * self.eps - 1) <= 1e-12:
            raise InvalidParametersError(
                f"eps**2 == 1 for sqrt_eps={self.sqrt_eps}",
                recovery_suggestion=(
                    "Choose |sqrt_eps| != 1 so that +-sqrt(eps) and +-1/sqrt(eps) differ"
                ),
            )


# ============================================================================
# Local data at the singular points
# ============================================================================


@dataclass(frozen=True)
class CharExponents:
    """Characteristic exponents of the perturbed equation.

    Attributes:
        rho: For each point, the pair (rho_1, rho_2)
    """

    rho: dict[SingularPoint, tuple[complex, complex]]

    def difference(self, point: SingularPoint) -> complex:
        """Exponent difference rho_1 - rho_2 at a point."""
        first, second = self.rho[point]
        return first - second

    def total(self) -> complex:
        return sum((a + b for a, b in self.rho.values()), start=0j)

    def to_dict(self) -> dict[str, Any]:
        return {pt.value: list(pair) for pt, pair in self.rho.items()}


_LOG_POINTS: dict[ResonanceKind, tuple[SingularPoint, SingularPoint]] = {
    ResonanceKind.A1: (SingularPoint.L, SingularPoint.LL),
    ResonanceKind.A2: (SingularPoint.L, SingularPoint.RR),
    ResonanceKind.A3: (SingularPoint.R, SingularPoint.LL),
    ResonanceKind.A4: (SingularPoint.R, SingularPoint.RR),
}


@dataclass(frozen=True)
class Resonance:
    """Double-resonance classification.

    Attributes:
        kind: A1..A4 or NONE
        n_beta: |beta2 - beta1| / (2 sqrt(eps)), positive when kind != NONE
        n_gamma: |gamma2 - gamma1| / (2 sqrt(eps)), non-negative
    """

    kind: ResonanceKind
    n_beta: int = 0
    n_gamma: int = 0

    @classmethod
    def none(cls) -> Resonance:
        return cls(ResonanceKind.NONE)

    @property
    def log_points(self) -> tuple[SingularPoint, ...]:
        """Points where the monodromy may carry a logarithm."""
        return _LOG_POINTS.get(self.kind, ())

    @property
    def origin_point(self) -> SingularPoint | None:
        points = self.log_points
        return points[0] if points else None

    @property
    def infinity_point(self) -> SingularPoint | None:
        points = self.log_points
        return points[1] if points else None

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "n_beta": self.n_beta, "n_gamma": self.n_gamma}


@dataclass(frozen=True)
class LinearFactor:
    """One factor (coef*x + const)**exponent of a closed-form solution."""

    coef: complex
    const: complex
    exponent: complex

    @property
    def root(self) -> complex:
        return -self.const / self.coef

    def __call__(self, x: complex) -> complex:
        return complex((self.coef * x + self.const) ** self.exponent)


# ============================================================================
# Stokes data
# ============================================================================


@dataclass(frozen=True)
class StokesMatrix:
    """Unipotent Stokes matrix [[1, mu], [0, 1]] with its singular direction.

    Attributes:
        theta: Singular direction in (-pi, pi]
        mu: Off-diagonal multiplier
    """

    theta: float
    mu: complex

    @property
    def theta_class(self) -> float:
        """The direction reduced to [0, 2*pi)."""
        return self.theta % (2 * math.pi)

    @property
    def matrix(self) -> Matrix2C:
        return np.array([[1, self.mu], [0, 1]], dtype=np.complex128)

    def is_trivial(self, tol: float) -> bool:
        return abs(self.mu) <= tol

    def to_dict(self) -> dict[str, Any]:
        return {"theta": self.theta, "theta_class": self.theta_class, "mu": self.mu}


@dataclass(frozen=True)
class SeriesCoefficients:
    """A finite run of formal coefficients.

    Attributes:
        kind: Which sequence the values belong to
        values: Coefficients, the first one attached to power `start`
        params: Parameters the coefficients were computed for
        start: Index of the first coefficient
        convergent: True when the underlying series converges (trivial Stokes data)
    """

    kind: SeriesKind
    values: list[complex]
    params: Params
    start: int = 0
    convergent: bool = False

    def __getitem__(self, k: int) -> complex:
        return self.values[k - self.start]

    def indices(self) -> range:
        return range(self.start, self.start + len(self.values))

    def ratio_radius_estimates(self) -> list[float]:
        """Ratio-test estimates |c_k / c_{k+1}| of the radius of convergence."""
        out: list[float] = []
        for current, following in zip(self.values, self.values[1:]):
            out.append(abs(current) / abs(following) if following != 0 else math.inf)
        return out

    def satisfies_gevrey_bound(self, bound: float, rate: float) -> bool:
        """Check |c_k| <= bound * rate**k * k! for every stored k."""
        return all(
            abs(value) <= bound * rate**k * math.factorial(k) * (1 + 1e-12)
            for k, value in zip(self.indices(), self.values)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "start": self.start,
            "convergent": self.convergent,
            "values": list(self.values),
        }


@dataclass(frozen=True)
class Ray:
    """Direction of a Laplace integral from 0 to infinity.

    Attributes:
        theta: Direction angle in radians
        truncation: Finite upper limit of the ray parameter; chosen from the
            decay margin when None
    """

    theta: float
    truncation: float | None = None

    @property
    def direction(self) -> complex:
        return cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class OneSum:
    """Value of a 1-sum at a point.

    Attributes:
        at: Evaluation point x
        value: Sum value
        theta: Direction of summation
        quadrature_error_estimate: Absolute error estimate (0 for direct sums)
        method: Laplace quadrature or direct summation
    """

    at: complex
    value: complex
    theta: float
    quadrature_error_estimate: float
    method: SummationMethod = SummationMethod.LAPLACE
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "at": self.at,
            "value": self.value,
            "theta": self.theta,
            "quadrature_error_estimate": self.quadrature_error_estimate,
            "method": self.method.value,
            **self.extra,
        }
