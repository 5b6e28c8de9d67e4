"""Monodromy of the unfolded equation at double resonance.

At a double resonance the ratio Phi2/Phi1 is rational and its residues d at
the two logarithmic points carry the whole nilpotent part of the local
monodromy:

    M = exp(2 pi i rho_1) [[1, 2 pi i d], [0, 1]]

As sqrt(eps) -> 0 through resonant values, [[1, 2 pi i d], [0, 1]] converges to
the Stokes matrices of the initial equation.

Design Philosophy:
- Closed-form double sums evaluated in mpmath with exact integer Gamma ratios
- Residues recomputed independently by the Leibniz rule on the factor product
- Every operation is gated on the resonance actually holding
- Convergence tables are deterministic (rows in n order, origin point first)

Example:
    >>> from stokes_unfold.model import classify_resonance
    >>> from stokes_unfold.types import Epsilon, Params, SingularPoint
    >>> p, e = Params(0, 2, 2, 0), Epsilon(0.5)
    >>> r = classify_resonance(p, e)
    >>> d = d_coefficient(p, e, r, SingularPoint.L)
    >>> abs(d - residue_by_leibniz(p, e, SingularPoint.L)) < 1e-8 * abs(d)
    True
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
from mpmath import mp

from .exceptions import (
    IncompatibleParametersError,
    InvalidParametersError,
    MultivaluedIntegrandError,
    ResonanceMismatchError,
)
from .model import PerturbedEquation, char_exponents, classify_resonance, is_resonance
from .specfun import binomial, integer_gamma_ratio, nearest_integer
from .stokes import bessel_sum_S, stokes_infinity, stokes_origin
from .types import Epsilon, Matrix2C, Params, Resonance, ResonanceKind, SingularPoint

logger = logging.getLogger(__name__)

DEFAULT_DPS = 40
MAX_SWEEP_N = 512
DEFAULT_CONVERGENCE_THRESHOLD = 5e-2


# ============================================================================
# Closed-form residues
# ============================================================================


@dataclass(frozen=True)
class _SumShape:
    """Sign, ratio, denominator and alternation pattern of one closed form."""

    sign: int
    ratio_plus: bool  # rho = (1+eps)/(1-eps) when True, else its inverse
    alternation: int  # 0: none, 1: (-1)**k, -1: (-1)**(k+1) or (-1)**(k-1)


_ORIGIN_SHAPES: dict[ResonanceKind, _SumShape] = {
    ResonanceKind.A1: _SumShape(-1, True, 0),
    ResonanceKind.A2: _SumShape(1, False, -1),
    ResonanceKind.A3: _SumShape(1, False, 1),
    ResonanceKind.A4: _SumShape(1, True, 0),
}

_INFINITY_SHAPES: dict[ResonanceKind, _SumShape] = {
    ResonanceKind.A1: _SumShape(1, True, 0),
    ResonanceKind.A2: _SumShape(-1, False, 1),
    ResonanceKind.A3: _SumShape(-1, False, -1),
    ResonanceKind.A4: _SumShape(-1, True, 0),
}


def _mp_fraction(value: Fraction) -> Any:
    return mp.mpf(value.numerator) / value.denominator


def _alternating(shape: _SumShape, k: int) -> int:
    if shape.alternation == 0:
        return 1
    if shape.alternation == 1:
        return -1 if k % 2 else 1
    return 1 if k % 2 else -1


def _origin_sum(shape: _SumShape, s: Any, n_beta: int, n_gamma: int) -> Any:
    eps = s * s
    rho = (1 + eps) / (1 - eps) if shape.ratio_plus else (1 - eps) / (1 + eps)
    denom = 1 + eps if shape.ratio_plus else 1 - eps
    terms = []
    for k in range(1, n_beta + 1):
        inner = mp.fsum(
            math.comb(k, j)
            * _mp_fraction(integer_gamma_ratio(n_gamma + j, n_gamma + j + 1 - k))
            * rho**j
            for j in range(k + 1)
        )
        outer = (
            _alternating(shape, k)
            * (2 * s) ** (k - 1)
            / (math.factorial(k - 1) * math.factorial(k))
            * (s / denom) ** k
            * _mp_fraction(integer_gamma_ratio(n_beta, n_beta - k + 1))
        )
        terms.append(outer * inner)
    return shape.sign * n_gamma * rho**n_gamma * mp.fsum(terms)


def _infinity_sum(shape: _SumShape, s: Any, n_beta: int, n_gamma: int) -> Any:
    eps = s * s
    rho = (1 + eps) / (1 - eps) if shape.ratio_plus else (1 - eps) / (1 + eps)
    denom = 1 + eps if shape.ratio_plus else 1 - eps
    terms = []
    for k in range(n_gamma):
        inner = mp.fsum(
            math.comb(k, j)
            * _mp_fraction(integer_gamma_ratio(n_beta + j + 1, n_beta - k + j))
            * rho**j
            for j in range(k + 1)
        )
        outer = (
            _alternating(shape, k)
            * (2 * s) ** (k + 1)
            / (math.factorial(k) * math.factorial(k + 1))
            * (s / denom) ** k
            * _mp_fraction(integer_gamma_ratio(n_gamma + 1, n_gamma - k))
        )
        terms.append(outer * inner)
    # the 2 sqrt(eps)/|beta2 - beta1| prefactor equals 1/n_beta
    return shape.sign * rho**n_beta / (n_beta * (1 - eps * eps)) * mp.fsum(terms)


def _check_resonance(p: Params, e: Epsilon, r: Resonance) -> None:
    e.require_regular()
    if r.kind is ResonanceKind.NONE or not is_resonance(p, e, r):
        actual = classify_resonance(p, e)
        raise ResonanceMismatchError(
            f"Parameters are not in resonance {r.kind.value} "
            f"(n_beta={r.n_beta}, n_gamma={r.n_gamma}); classified as {actual.kind.value}",
            recovery_suggestion="Use classify_resonance to obtain the resonance of (p, eps)",
        )


def d_coefficient(
    p: Params, e: Epsilon, r: Resonance, point: SingularPoint, dps: int = DEFAULT_DPS
) -> complex:
    """Residue d of Phi2/Phi1 at a singular point, from the closed-form double sums.

    Non-logarithmic points and gamma1 == gamma2 give exactly 0.

    Raises:
        ResonanceMismatchError: If (p, e) is not in resonance r
        InvalidParametersError: If eps**2 == 1
    """
    _check_resonance(p, e, r)
    if point not in r.log_points or r.n_gamma == 0:
        return 0j

    with mp.workdps(dps + r.n_beta // 8 + r.n_gamma // 8):
        s = mp.mpf(e.sqrt_eps.real)
        if point == r.origin_point:
            value = _origin_sum(_ORIGIN_SHAPES[r.kind], s, r.n_beta, r.n_gamma)
        else:
            value = _infinity_sum(_INFINITY_SHAPES[r.kind], s, r.n_beta, r.n_gamma)
        return complex(value)


def residue_by_leibniz(p: Params, e: Epsilon, point: SingularPoint) -> complex:
    """Residue of Phi2/Phi1 at a point from the Leibniz rule on its linear factors.

    Near the point x_p the ratio is (a_p w)**(-N) times a product of factors
    analytic at w = 0, so the residue is a_p**(-N) times the coefficient of
    w**(N-1) in that product.

    Raises:
        MultivaluedIntegrandError: If the local exponent is not an integer
    """
    factors = PerturbedEquation(p, e).ratio_factors()
    local = factors[point]
    order = nearest_integer(local.exponent, 1e-9)
    if order is None:
        mismatch = abs(cmath.exp(2j * math.pi * local.exponent) - 1)
        raise MultivaluedIntegrandError(mismatch)
    if order >= 0:
        return 0j
    n = -order
    x_p = local.root

    series = np.zeros(n, dtype=np.complex128)
    series[0] = 1
    for pt, factor in factors.items():
        if pt == point:
            continue
        c = factor.coef * x_p + factor.const
        base = complex(c**factor.exponent)
        step = factor.coef / c
        expansion = np.array(
            [binomial(factor.exponent, j) * step**j for j in range(n)], dtype=np.complex128
        )
        series = base * np.convolve(series, expansion)[:n]
    return complex(series[n - 1] * local.coef ** (-n))


# ============================================================================
# Monodromy decompositions
# ============================================================================


@dataclass(frozen=True)
class MonodromyDecomp:
    """Local monodromy at one singular point, exponent part times unipotent part.

    Attributes:
        point: Singular point
        exponent_part: diag(exp(2 pi i rho_1), exp(2 pi i (rho_2 - 1)))
        d: Residue of Phi2/Phi1 (nilpotent entry of T)
        rho: Characteristic exponents (rho_1, rho_2) at the point
    """

    point: SingularPoint
    exponent_part: Matrix2C
    d: complex
    rho: tuple[complex, complex]

    @property
    def T(self) -> Matrix2C:  # noqa: N802
        return np.array([[0, self.d], [0, 0]], dtype=np.complex128)

    @property
    def unipotent(self) -> Matrix2C:
        """exp(2 pi i T) = [[1, 2 pi i d], [0, 1]]."""
        return np.array([[1, 2j * math.pi * self.d], [0, 1]], dtype=np.complex128)

    @property
    def M(self) -> Matrix2C:  # noqa: N802
        return self.exponent_part @ self.unipotent

    def commutator_norm(self) -> float:
        a, b = self.exponent_part, self.unipotent
        return float(np.linalg.norm(a @ b - b @ a))

    def determinant(self) -> complex:
        return complex(np.linalg.det(self.M))

    def expected_determinant(self) -> complex:
        return cmath.exp(2j * math.pi * (self.rho[0] + self.rho[1] - 1))

    def to_dict(self) -> dict[str, Any]:
        return {
            "point": self.point.value,
            "rho": list(self.rho),
            "d": self.d,
            "exponent_part": [complex(self.exponent_part[0, 0]), complex(self.exponent_part[1, 1])],
            "M": [[complex(v) for v in row] for row in self.M],
            "commutator_norm": self.commutator_norm(),
        }


def monodromy_decomp(
    p: Params, e: Epsilon, r: Resonance, point: SingularPoint, dps: int = DEFAULT_DPS
) -> MonodromyDecomp:
    """Monodromy decomposition M = exponent_part exp(2 pi i T) at a point."""
    d = d_coefficient(p, e, r, point, dps)
    rho1, rho2 = char_exponents(p, e).rho[point]
    exponent_part = np.diag(
        [cmath.exp(2j * math.pi * rho1), cmath.exp(2j * math.pi * (rho2 - 1))]
    ).astype(np.complex128)
    return MonodromyDecomp(point=point, exponent_part=exponent_part, d=d, rho=(rho1, rho2))


def unfolded_stokes(
    p: Params, e: Epsilon, r: Resonance, point: SingularPoint, dps: int = DEFAULT_DPS
) -> Matrix2C:
    """Unfolded Stokes matrix exp(2 pi i T) = [[1, 2 pi i d], [0, 1]]."""
    d = d_coefficient(p, e, r, point, dps)
    return np.array([[1, 2j * math.pi * d], [0, 1]], dtype=np.complex128)


def all_decompositions(p: Params, e: Epsilon, r: Resonance) -> list[MonodromyDecomp]:
    """Decompositions at all four singular points, in R, L, RR, LL order."""
    return [monodromy_decomp(p, e, r, pt) for pt in SingularPoint]


# ============================================================================
# Limits and convergence
# ============================================================================


def limit_closed_form(p: Params) -> tuple[complex, complex]:
    """Limits of d at the origin-side and infinity-side points: (-dg S, +dg S)."""
    if p.gammas_equal:
        return 0j, 0j
    value = -p.delta_gamma * bessel_sum_S(p)
    return value, -value


_CASE_KINDS: dict[int, ResonanceKind] = {
    1: ResonanceKind.A2,
    2: ResonanceKind.A3,
    3: ResonanceKind.A1,
    4: ResonanceKind.A4,
}


def case_for_signs(p: Params) -> int:
    """Convergence case implied by the signs of beta2 - beta1 and gamma2 - gamma1.

    1: both positive, 2: both negative, 3: db > 0 > dg, 4: db < 0 < dg.

    Raises:
        IncompatibleParametersError: If either difference is non-real or zero
    """
    db, dg = p.delta_beta, p.delta_gamma
    for name, value in (("beta2 - beta1", db), ("gamma2 - gamma1", dg)):
        if abs(value.imag) > 1e-12 * max(1.0, abs(value)) or value.real == 0:
            raise IncompatibleParametersError(
                f"{name} = {value} must be real and non-zero for the convergence experiment"
            )
    if db.real > 0:
        return 1 if dg.real > 0 else 3
    return 4 if dg.real > 0 else 2


@dataclass(frozen=True)
class ConvergenceRow:
    """One (n, point) row of a convergence table."""

    n: int
    point: SingularPoint
    sqrt_eps: float
    d: complex
    target: complex
    abs_err: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "point": self.point.value,
            "sqrt_eps": self.sqrt_eps,
            "d": self.d,
            "abs_err": self.abs_err,
        }


@dataclass(frozen=True)
class ConvergenceTable:
    """Errors |2 pi i d(eps_n) - mu| along a resonant sequence eps_n -> 0.

    Attributes:
        case: Convergence case 1..4
        kind: Resonance type of every eps_n
        mu_origin: Stokes multiplier at the origin
        mu_infinity: Stokes multiplier at infinity
        rows: Rows in n order, origin-side point first
        threshold: Relative error bound for the final n
    """

    case: int
    kind: ResonanceKind
    mu_origin: complex
    mu_infinity: complex
    rows: list[ConvergenceRow] = field(default_factory=list)
    threshold: float = DEFAULT_CONVERGENCE_THRESHOLD

    def errors(self, point: SingularPoint) -> list[float]:
        return [row.abs_err for row in self.rows if row.point == point]

    def passes(self) -> bool:
        """Final error below threshold |mu| and below the first error, at both points."""
        if not self.rows:
            return False
        ok = True
        for point, mu in self._points():
            errs = self.errors(point)
            bound = self.threshold * abs(mu) if abs(mu) > 0 else self.threshold
            ok = ok and errs[-1] < bound and (len(errs) == 1 or errs[-1] < errs[0] or errs[0] == 0)
        return ok

    def _points(self) -> list[tuple[SingularPoint, complex]]:
        origin, infinity = Resonance(self.kind).log_points
        return [(origin, self.mu_origin), (infinity, self.mu_infinity)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": self.case,
            "kind": self.kind.value,
            "mu_origin": self.mu_origin,
            "mu_infinity": self.mu_infinity,
            "threshold": self.threshold,
            "passes": self.passes(),
            "rows": [row.to_dict() for row in self.rows],
        }


def limit_experiment(
    p: Params,
    case: int | None,
    n_list: Sequence[int],
    threshold: float = DEFAULT_CONVERGENCE_THRESHOLD,
) -> ConvergenceTable:
    """d at both logarithmic points along sqrt(eps_n) = |beta2 - beta1| / (2n).

    Args:
        p: Parameters with real, non-zero differences
        case: Expected convergence case (checked against the signs), or None to infer
        n_list: Values of n (1 <= n <= 512)
        threshold: Relative error bound used by ConvergenceTable.passes

    Raises:
        IncompatibleParametersError: If signs, n values or ratios do not fit
    """
    implied = case_for_signs(p)
    if case is not None and case != implied:
        raise IncompatibleParametersError(
            f"Parameter signs imply case {implied}, not case {case}"
        )
    if not n_list:
        raise IncompatibleParametersError("n_list must not be empty")

    kind = _CASE_KINDS[implied]
    db = abs(p.delta_beta.real)
    dg = abs(p.delta_gamma.real)
    mu_origin = stokes_origin(p).mu
    mu_infinity = stokes_infinity(p).mu
    lim_origin, lim_infinity = limit_closed_form(p)
    origin_point, infinity_point = Resonance(kind).log_points

    rows: list[ConvergenceRow] = []
    for n in sorted(set(n_list)):
        if n < 1 or n > MAX_SWEEP_N:
            raise IncompatibleParametersError(f"n={n} is outside 1..{MAX_SWEEP_N}")
        n_gamma = nearest_integer(n * dg / db, 1e-9)
        if n_gamma is None:
            raise IncompatibleParametersError(
                f"n={n} gives a non-integer n_gamma={n * dg / db}",
                recovery_suggestion=(
                    "Choose (gamma2 - gamma1)/(beta2 - beta1) rational with a compatible n"
                ),
            )
        e = Epsilon(db / (2 * n))
        try:
            e.require_regular()
        except InvalidParametersError as err:
            raise IncompatibleParametersError(f"n={n} gives eps**2 == 1") from err
        r = Resonance(kind, n, n_gamma)
        for point, target in ((origin_point, lim_origin), (infinity_point, lim_infinity)):
            d = d_coefficient(p, e, r, point)
            rows.append(
                ConvergenceRow(
                    n=n,
                    point=point,
                    sqrt_eps=e.sqrt_eps.real,
                    d=d,
                    target=target,
                    abs_err=2 * math.pi * abs(d - target),
                )
            )
        logger.info(f"case {implied} n={n}: rows for {origin_point.value}, {infinity_point.value}")

    return ConvergenceTable(
        case=implied,
        kind=kind,
        mu_origin=mu_origin,
        mu_infinity=mu_infinity,
        rows=rows,
        threshold=threshold,
    )
