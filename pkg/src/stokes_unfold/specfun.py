"""Complex special functions used by every closed form in stokes-unfold.

Provides log-Gamma, Gamma ratios that stay finite across integer shifts,
rising factorials, generalized binomials and the entire Bessel-kernel series

    phi_nu(w) = sum_k w**k / (k! (k+nu)!)

whose nu=1 member satisfies phi_1(-(z/2)**2) = J_1(z) / (z/2).

Design Philosophy:
- Principal branches everywhere
- Integer shifts of Gamma arguments go through exact finite products
- Series use term-ratio recurrences instead of factorials
- Cancellation-heavy kernel sums are redone in mpmath at the precision they need

Example:
    >>> from stokes_unfold.specfun import bessel_kernel_phi1
    >>> round(bessel_kernel_phi1(1.0).value.real, 4)
    1.5906
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp
from scipy import optimize, special

from .exceptions import (
    ConvergenceError,
    InvalidParametersError,
    PoleError,
    UndefinedRatioError,
)

logger = logging.getLogger(__name__)

DEFAULT_KERNEL_TOL = 1e-15
_INTEGER_TOL = 1e-12
_MAX_TERMS = 100_000
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class BesselKernelValue:
    """Value of a Bessel-kernel series.

    Attributes:
        value: Series value
        terms_used: Number of terms summed (at least 1)
        extended_precision: True when the sum was redone in mpmath
    """

    value: complex
    terms_used: int
    extended_precision: bool = False


# ============================================================================
# Integer detection
# ============================================================================


def nearest_integer(z: complex, tol: float = _INTEGER_TOL) -> int | None:
    """Return round(z) if z is an integer within a relative tolerance, else None."""
    z = complex(z)
    n = round(z.real)
    scale = max(1.0, abs(z))
    if abs(z.real - n) < tol * scale and abs(z.imag) < tol * scale:
        return int(n)
    return None


def is_pole(z: complex) -> bool:
    """True when z is a non-positive integer (a pole of Gamma)."""
    n = nearest_integer(z)
    return n is not None and n <= 0


# ============================================================================
# Gamma family
# ============================================================================


def log_gamma(z: complex) -> complex:
    """Principal-branch log-Gamma, exp(log_gamma(z)) == Gamma(z).

    Args:
        z: Complex argument

    Returns:
        log Gamma(z)

    Raises:
        PoleError: If z is 0, -1, -2, ...
    """
    z = complex(z)
    if is_pole(z):
        raise PoleError(z)
    return complex(special.loggamma(z))


def rising_factorial(a: complex, n: int) -> complex:
    """Rising factorial (a)^(n) = a (a+1) ... (a+n-1), with (a)^(0) = 1.

    Raises:
        InvalidParametersError: If n < 0
    """
    if n < 0:
        raise InvalidParametersError(f"rising_factorial needs n >= 0, got {n}")
    a = complex(a)
    result = 1 + 0j
    for i in range(n):
        result *= a + i
    return result


def gamma_ratio(z: complex, a: complex, b: complex) -> complex:
    """Gamma(z+a) / Gamma(z+b).

    When a - b is an integer the ratio is a finite product, which also covers
    arguments on poles whenever the ratio stays finite.

    Raises:
        UndefinedRatioError: If the numerator sits on an uncancelled pole
    """
    top = complex(z) + complex(a)
    bottom = complex(z) + complex(b)
    shift = nearest_integer(top - bottom)

    if shift is not None:
        if shift >= 0:
            return rising_factorial(bottom, shift)
        denominator = rising_factorial(top, -shift)
        if denominator == 0:
            raise UndefinedRatioError(top, bottom)
        return 1 / denominator

    if is_pole(top):
        raise UndefinedRatioError(top, bottom)
    if is_pole(bottom):
        return 0j
    return cmath.exp(complex(special.loggamma(top)) - complex(special.loggamma(bottom)))


def integer_gamma_ratio(a: int, b: int) -> Fraction:
    """Exact Gamma(a) / Gamma(b) for integer arguments.

    A pole in the denominator alone gives exactly 0.

    Raises:
        UndefinedRatioError: If a <= 0
    """
    if a <= 0:
        raise UndefinedRatioError(a, b)
    if b <= 0:
        return Fraction(0)
    if a >= b:
        return Fraction(math.prod(range(b, a)))
    return Fraction(1, math.prod(range(a, b)))


def binomial(top: complex, j: int) -> complex:
    """Generalized binomial coefficient C(top, j) for complex top."""
    if j < 0:
        return 0j
    result = 1 + 0j
    top = complex(top)
    for i in range(j):
        result *= (top - i) / (i + 1)
    return result


# ============================================================================
# Bessel kernels
# ============================================================================


def bessel_kernel(w: complex, order: int = 1, tol: float = DEFAULT_KERNEL_TOL) -> BesselKernelValue:
    """Sum phi_order(w) = sum_k w**k / (k! (k+order)!).

    The series is entire. Terms come from t_{k+1} = t_k w / ((k+1)(k+1+order)),
    and summation stops past the peak term once |t_k| < tol * |partial|. When the
    largest term dwarfs the result (negative real w of large size) the sum is
    redone with mpmath at a working precision covering the cancellation.

    Args:
        w: Complex argument
        order: Non-negative integer order
        tol: Relative truncation tolerance (> 0)

    Returns:
        BesselKernelValue with the sum and the number of terms used

    Raises:
        InvalidParametersError: If tol <= 0 or order < 0
        ConvergenceError: If the terms overflow before the tail is small enough
    """
    if tol <= 0:
        raise InvalidParametersError(f"tol must be positive, got {tol}")
    if order < 0:
        raise InvalidParametersError(f"Kernel order must be >= 0, got {order}")

    w = complex(w)
    term = 1 / complex(math.factorial(order))
    partial = term
    largest = abs(term)
    k = 0
    peak = math.sqrt(abs(w))

    while True:
        term *= w / ((k + 1) * (k + 1 + order))
        k += 1
        partial += term
        size = abs(term)
        if not math.isfinite(size) or not math.isfinite(abs(partial)):
            raise ConvergenceError(
                f"Bessel kernel series overflowed at |w|={abs(w):.3e}",
                recovery_suggestion="Use a smaller argument; the series is evaluated at desk scale",
            )
        largest = max(largest, size)
        if k > peak and size <= tol * abs(partial):
            break
        if size == 0:
            break
        if k >= _MAX_TERMS:
            raise ConvergenceError(f"Bessel kernel did not converge in {_MAX_TERMS} terms")

    terms_used = k + 1
    if abs(partial) == 0 or largest * _EPS > tol * abs(partial):
        lost = math.log10(largest / max(abs(partial), 1e-300)) if largest > 0 else 0.0
        dps = int(min(max(lost, 0.0), 4000)) + 20
        logger.debug(f"phi_{order}({w}): cancellation of {lost:.1f} digits, redoing at {dps} dps")
        return BesselKernelValue(mp_bessel_kernel(w, order, dps), terms_used, True)

    return BesselKernelValue(partial, terms_used)


def bessel_kernel_phi1(w: complex, tol: float = DEFAULT_KERNEL_TOL) -> BesselKernelValue:
    """phi_1(w) = sum_k w**k / (k! (k+1)!)."""
    return bessel_kernel(w, 1, tol)


def phi1(w: complex, tol: float = DEFAULT_KERNEL_TOL) -> complex:
    """Value of phi_1 as a plain complex number."""
    return bessel_kernel(w, 1, tol).value


def mp_bessel_kernel(w: complex, order: int = 1, dps: int = 30) -> complex:
    """phi_order(w) through mpmath's 0F1 at `dps` significant digits."""
    with mp.workdps(dps):
        value = mp.hyp0f1(order + 1, mp.mpc(w)) / mp.factorial(order)
        return complex(value)


def mp_phi(w: object, order: int = 1) -> object:
    """phi_order(w) as an mpmath number at the caller's working precision."""
    return mp.hyp0f1(order + 1, w) / mp.factorial(order)


def bessel_j1_zero() -> float:
    """First positive zero of J_1, found by Brent's method on the phi_1 series.

    Returns:
        z_1 ~ 3.8317059702075
    """

    def f(z: float) -> float:
        return phi1(-(z / 2) ** 2).real

    root = optimize.brentq(f, 3.5, 4.0, xtol=1e-15, rtol=4 * _EPS)
    return float(root)
