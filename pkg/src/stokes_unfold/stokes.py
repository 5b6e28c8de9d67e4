"""Formal data and exact Stokes matrices of the initial equation.

Everything here is driven by the number

    S = sum_n (-1)**(n+1) (dg db)**n / (n! (n+1)!) = -phi_1(-dg db)

with db = beta2 - beta1 and dg = gamma2 - gamma1. Its partial sums S_k feed
the divergent series at 0 and at infinity, and S itself gives both Stokes
multipliers.

Design Philosophy:
- One kernel code path (specfun.phi1) for S
- Coefficient factors built by recurrences, never by raw factorials
- S below the snapping tolerance is treated as exactly 0 and the partial sums
  switch to their tail form, so the convergent series are computed faithfully

Example:
    >>> from stokes_unfold.stokes import stokes_origin
    >>> from stokes_unfold.types import Params
    >>> round(stokes_origin(Params(0, 1, 0, 1)).mu.imag, 4)
    3.6237
"""

from __future__ import annotations

import cmath
import logging
import math

from .exceptions import DegenerateDirectionError, DegenerateParametersError, InvalidParametersError
from .specfun import phi1
from .types import Params, SeriesCoefficients, SeriesKind, StokesMatrix

logger = logging.getLogger(__name__)

DEFAULT_S_TOL = 1e-14
DEFAULT_SNAP_TOL = 1e-12
_TAIL_FLOOR = 1e-300


def bessel_sum_S(p: Params, tol: float = DEFAULT_S_TOL) -> complex:  # noqa: N802
    """S = -phi_1(-(gamma2 - gamma1)(beta2 - beta1))."""
    return -phi1(-p.delta_gamma * p.delta_beta, tol)


def is_trivial_stokes(p: Params, snap_tol: float = DEFAULT_SNAP_TOL) -> bool:
    """True when S vanishes (both Stokes matrices are the identity)."""
    return abs(bessel_sum_S(p)) <= snap_tol


def _terms(p: Params, count: int) -> list[complex]:
    """Terms t_0 .. t_{count-1} of the S series."""
    w = -p.delta_gamma * p.delta_beta
    term = -1 + 0j
    out = [term]
    for n in range(count - 1):
        term *= w / ((n + 1) * (n + 2))
        out.append(term)
    return out


def partial_sums(p: Params, K: int) -> list[complex]:  # noqa: N803
    """Running partial sums S_0 .. S_K of the S series.

    Raises:
        InvalidParametersError: If K < 0
    """
    if K < 0:
        raise InvalidParametersError(f"K must be >= 0, got {K}")
    sums = []
    total = 0j
    for term in _terms(p, K + 1):
        total += term
        sums.append(total)
    return sums


def coefficient_sums(
    p: Params, K: int, snap_tol: float = DEFAULT_SNAP_TOL  # noqa: N803
) -> tuple[list[complex], bool]:
    """S_0 .. S_{K-1} as used in the series coefficients, and the triviality flag.

    When |S| <= snap_tol the sums are rebuilt as S_{k-1} = -sum_{n >= k} t_n,
    which is exact for S = 0 and keeps the small tails accurate.
    """
    if K <= 0:
        return [], is_trivial_stokes(p, snap_tol)
    if not is_trivial_stokes(p, snap_tol):
        return partial_sums(p, K - 1), False

    count = K + 1
    terms = _terms(p, count)
    # extend until the tail past K is negligible
    while abs(terms[-1]) > _TAIL_FLOOR and abs(terms[-1]) > 1e-18 * max(
        abs(t) for t in terms[K - 1 :]
    ):
        terms = _terms(p, len(terms) + 32)
    tails = [0j] * (len(terms) + 1)
    for n in range(len(terms) - 1, -1, -1):
        tails[n] = tails[n + 1] + terms[n]
    logger.debug(f"S snapped to 0, tail form over {len(terms)} terms")
    return [-tails[k] for k in range(1, K + 1)], True


def psi_coefficients(
    p: Params, K: int, snap_tol: float = DEFAULT_SNAP_TOL  # noqa: N803
) -> SeriesCoefficients:
    """Coefficients b_k = (-1)**k k! S_{k-1} / (beta2 - beta1)**k, k = 1..K.

    Example:
        >>> psi_coefficients(Params(0, 2, 0, 1), 1)[1]
        (0.5+0j)
    """
    sums, trivial = coefficient_sums(p, K, snap_tol)
    db = p.delta_beta
    factor = 1 + 0j
    values = []
    for k in range(1, K + 1):
        factor *= -k / db
        values.append(factor * sums[k - 1])
    return SeriesCoefficients(SeriesKind.PSI_HAT, values, p, start=1, convergent=trivial)


def phi_coefficients(
    p: Params, K: int, snap_tol: float = DEFAULT_SNAP_TOL  # noqa: N803
) -> SeriesCoefficients:
    """Coefficients k! S_{k-1} / (gamma2 - gamma1)**k of the series in 1/x, k = 1..K.

    Raises:
        DegenerateParametersError: If gamma1 == gamma2
    """
    if p.gammas_equal:
        raise DegenerateParametersError("The series at infinity is undefined for gamma1 == gamma2")
    sums, trivial = coefficient_sums(p, K, snap_tol)
    dg = p.delta_gamma
    factor = 1 + 0j
    values = []
    for k in range(1, K + 1):
        factor *= k / dg
        values.append(factor * sums[k - 1])
    return SeriesCoefficients(SeriesKind.PHI_HAT, values, p, start=1, convergent=trivial)


def a_k_recursion(p: Params, K: int) -> tuple[SeriesCoefficients, SeriesCoefficients]:  # noqa: N803
    """The a_k sequence and the derived c_k sequence.

    (k-1) a_{k-1} + db a_k + dg a_{k-2} = 0 with a_0 = 1/db, a_1 = 0, and
    c_k = sum_{s=0}^{k-1} dg**s / s! a_{k+1-s} for k = 1..K.

    Returns:
        (a_0..a_{K+1}, c_1..c_K)
    """
    if K < 0:
        raise InvalidParametersError(f"K must be >= 0, got {K}")
    db = p.delta_beta
    dg = p.delta_gamma
    a = [1 / db, 0j]
    for k in range(2, K + 2):
        a.append(-((k - 1) * a[k - 1] + dg * a[k - 2]) / db)

    powers = [1 + 0j]
    for s in range(1, K + 1):
        powers.append(powers[-1] * dg / s)
    c = [sum((powers[s] * a[k + 1 - s] for s in range(k)), start=0j) for k in range(1, K + 1)]
    return (
        SeriesCoefficients(SeriesKind.A_K, a, p, start=0),
        SeriesCoefficients(SeriesKind.C_K, c, p, start=1),
    )


def singular_direction_origin(p: Params) -> float:
    """arg(beta1 - beta2) in (-pi, pi]."""
    return _arg(-p.delta_beta)


def singular_direction_infinity(p: Params) -> float:
    """arg(gamma2 - gamma1) in (-pi, pi].

    Raises:
        DegenerateDirectionError: If gamma1 == gamma2
    """
    if p.gammas_equal:
        raise DegenerateDirectionError(
            "Singular direction at infinity is undefined for gamma1 == gamma2"
        )
    return _arg(p.delta_gamma)


def _arg(z: complex) -> float:
    theta = cmath.phase(z)
    return math.pi if theta == -math.pi else theta


def stokes_origin(p: Params, tol: float = DEFAULT_S_TOL) -> StokesMatrix:
    """Stokes matrix at the origin: mu = -2 pi i (gamma2 - gamma1) S."""
    S = bessel_sum_S(p, tol)  # noqa: N806
    return StokesMatrix(theta=singular_direction_origin(p), mu=-2j * math.pi * p.delta_gamma * S)


def stokes_infinity(p: Params, tol: float = DEFAULT_S_TOL) -> StokesMatrix:
    """Stokes matrix at infinity: mu = +2 pi i (gamma2 - gamma1) S.

    Raises:
        DegenerateDirectionError: If gamma1 == gamma2
    """
    theta = singular_direction_infinity(p)
    S = bessel_sum_S(p, tol)  # noqa: N806
    return StokesMatrix(theta=theta, mu=2j * math.pi * p.delta_gamma * S)
