"""Borel-Laplace summation for the initial equation.

The divergent series at the origin and at infinity are 1-summable. Their
Borel transforms are built from the entire kernels

    u(z) = phi_1((gamma2 - gamma1) z)      (origin)
    v(p) = phi_1(-(beta2 - beta1) p)       (infinity)

and the sums are Laplace integrals along rays. Crossing the singular
direction picks up the residue at the Borel pole, which is the Stokes jump.

Design Philosophy:
- One ray quadrature routine (laplace_ray) for every transform
- Double precision through scipy.integrate.quad, extended precision through
  mpmath when a caller asks for dps
- Pole breakpoints at the closest approach of the ray, so near-singular rays
  stay accurate
- Convergent cases (S = 0, gamma1 == gamma2 at infinity) skip quadrature

Example:
    >>> from stokes_unfold.borel import laplace_ray
    >>> from stokes_unfold.types import Ray
    >>> round(abs(laplace_ray(lambda z: 1.0, Ray(0.0), 0.5)), 10)
    1.0
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from mpmath import mp
from scipy import integrate

from .exceptions import (
    DegenerateParametersError,
    DomainError,
    InvalidParametersError,
    QuadratureError,
    SingularDirectionError,
)
from .specfun import bessel_kernel, mp_phi, phi1
from .stokes import (
    bessel_sum_S,
    is_trivial_stokes,
    phi_coefficients,
    psi_coefficients,
    singular_direction_origin,
)
from .types import Frame, LaplaceForm, OneSum, Params, Ray, SummationMethod

logger = logging.getLogger(__name__)

DEFAULT_QUAD_TOL = 1e-10
DEFAULT_JUMP_DPS = 30
DEFAULT_EPS_ANGLE = 0.05
_QUAD_LIMIT = 400
_MAX_SERIES_TERMS = 2000

Integrand = Callable[[Any], Any]


# ============================================================================
# Kernels
# ============================================================================


def kernel_u(p: Params, zeta: complex) -> complex:
    """Borel kernel at the origin, u(z) = phi_1((gamma2 - gamma1) z)."""
    return phi1(p.delta_gamma * complex(zeta))


def kernel_v(p: Params, pp: complex) -> complex:
    """Borel kernel at infinity, v(p) = phi_1(-(beta2 - beta1) p)."""
    return phi1(-p.delta_beta * complex(pp))


def _exprel(z: complex) -> complex:
    """(exp(z) - 1) / z, equal to 1 at z = 0."""
    if abs(z) < 1e-5:
        return 1 + z / 2 + z * z / 6
    return (cmath.exp(z) - 1) / z


# ============================================================================
# Ray quadrature
# ============================================================================


def _decay_margin(ray: Ray, x: complex, form: LaplaceForm, growth: float) -> float:
    if form is LaplaceForm.ORIGIN:
        rate = (ray.direction / x).real
    else:
        rate = (x * ray.direction).real
    return rate - growth


def _breakpoints(ray: Ray, poles: Sequence[complex], upper: float) -> list[float]:
    points: set[float] = set()
    rotate = cmath.exp(-1j * ray.theta)
    for pole in poles:
        local = complex(pole) * rotate
        along, off = local.real, abs(local.imag)
        if along < 0:
            continue
        if off <= 1e-12 * max(1.0, abs(pole)):
            raise SingularDirectionError(ray.theta, cmath.phase(pole))
        for offset in (0.0, off, -off, 4 * off, -4 * off):
            t = along + offset
            if 0 < t < upper:
                points.add(t)
    return sorted(points)


def _ray_setup(
    ray: Ray, x: complex, form: LaplaceForm, growth: float, poles: Sequence[complex], tol: float
) -> tuple[float, list[float]]:
    """Truncation point and pole breakpoints of a ray integral."""
    if x == 0:
        raise DomainError("Laplace transform needs x != 0")
    margin = _decay_margin(ray, x, form, growth)
    if margin <= 0:
        where = "Re(exp(i theta)/x)" if form is LaplaceForm.ORIGIN else "Re(x exp(i theta))"
        raise DomainError(
            f"x={x} is outside the convergence region along theta={ray.theta:.6g}: "
            f"{where} must exceed {growth:.6g}"
        )
    upper = ray.truncation if ray.truncation is not None else (math.log(1 / tol) + 20) / margin
    return upper, _breakpoints(ray, poles, upper)


def laplace_ray_estimate(
    f: Integrand,
    ray: Ray,
    x: complex,
    *,
    tol: float = DEFAULT_QUAD_TOL,
    form: LaplaceForm = LaplaceForm.ORIGIN,
    growth: float = 0.0,
    poles: Sequence[complex] = (),
    dps: int | None = None,
) -> tuple[complex, float]:
    """Laplace transform along a ray together with its error estimate.

    See laplace_ray for the arguments.

    Returns:
        (value, absolute error estimate)
    """
    x = complex(x)
    upper, breaks = _ray_setup(ray, x, form, growth, poles, tol)

    if dps is not None:
        value_mp, error_mp = _laplace_mp(f, ray, x, form, upper, breaks, dps)
        return complex(value_mp), float(error_mp)

    direction = ray.direction
    if form is LaplaceForm.ORIGIN:
        rate = direction / x
        weight = direction / x
    else:
        rate = x * direction
        weight = direction

    def integrand(t: float) -> complex:
        return complex(f(t * direction)) * cmath.exp(-rate * t) * weight

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(
            integrand,
            0.0,
            upper,
            complex_func=True,
            points=breaks or None,
            limit=_QUAD_LIMIT,
            epsabs=tol / 10,
            epsrel=min(tol, 1e-13),
        )
    error = abs(error)
    logger.debug(
        f"laplace_ray theta={ray.theta:.4g} x={x} T={upper:.3g} "
        f"breaks={len(breaks)} err={error:.2e}"
    )
    if caught and error > max(tol, tol * abs(value)):
        raise QuadratureError(
            f"Ray quadrature stalled at error {error:.3e} (tol {tol:.1e}): {caught[0].message}"
        )
    return complex(value), error


def _laplace_mp(
    f: Integrand,
    ray: Ray,
    x: complex,
    form: LaplaceForm,
    upper: float,
    breaks: list[float],
    dps: int,
) -> tuple[Any, Any]:
    """Ray integral in mpmath; the value keeps its extended precision."""
    with mp.workdps(dps):
        direction = mp.expj(ray.theta)
        xm = mp.mpc(x)
        if form is LaplaceForm.ORIGIN:
            rate = direction / xm
            weight = direction / xm
        else:
            rate = xm * direction
            weight = direction

        def integrand(t: Any) -> Any:
            return f(t * direction) * mp.exp(-rate * t) * weight

        nodes = [mp.mpf(0), *[mp.mpf(b) for b in breaks], mp.mpf(upper)]
        value, error = mp.quad(integrand, nodes, error=True)
        logger.debug(f"laplace_ray[mp {dps}] theta={ray.theta:.4g} x={x} err={float(error):.2e}")
        if not mp.isfinite(value):
            raise QuadratureError(f"Extended-precision ray quadrature diverged at x={x}")
        return value, error


def laplace_ray(
    f: Integrand,
    ray: Ray,
    x: complex,
    tol: float = DEFAULT_QUAD_TOL,
    *,
    form: LaplaceForm = LaplaceForm.ORIGIN,
    growth: float = 0.0,
    poles: Sequence[complex] = (),
    dps: int | None = None,
) -> complex:
    """Laplace transform of f along a ray from 0 to infinity in direction theta.

    - ORIGIN form: integral of f(z) exp(-z/x) dz/x
    - INFINITY form: integral of f(p) exp(-x p) dp

    The ray is truncated at T = (ln(1/tol) + 20) / margin, where margin is the
    decay rate minus the growth rate of f, unless ray.truncation is set.

    Args:
        f: Integrand in the Borel variable (receives mpmath numbers when dps is set)
        ray: Direction (and optional truncation)
        x: Evaluation point
        tol: Absolute tolerance
        form: Transform normalization
        growth: Exponential growth rate of f along the ray
        poles: Singularities of f, used as quadrature breakpoints
        dps: Decimal digits for an mpmath evaluation; double precision when None

    Raises:
        DomainError: If x is outside the convergence region
        SingularDirectionError: If the ray runs through a pole
        QuadratureError: If adaptive refinement stalls
    """
    value, _ = laplace_ray_estimate(
        f, ray, x, tol=tol, form=form, growth=growth, poles=poles, dps=dps
    )
    return value


def _same_direction(theta: float, other: float, tol: float = 1e-12) -> bool:
    diff = (theta - other + math.pi) % (2 * math.pi) - math.pi
    return abs(diff) <= tol


# ============================================================================
# 1-sums
# ============================================================================


def _sum_series(values_for: Callable[[int], list[complex]], z: complex, tol: float) -> complex:
    """Sum a convergent coefficient series c_1 z + c_2 z**2 + ... to tolerance."""
    count = 40
    while True:
        coefficients = values_for(count)
        total = 0j
        power = 1 + 0j
        last = math.inf
        for c in coefficients:
            power *= z
            term = c * power
            total += term
            last = abs(term)
        if last <= tol * max(1.0, abs(total)) or count >= _MAX_SERIES_TERMS:
            return total
        count *= 2


def psi_sum(
    p: Params, theta: float, x: complex, tol: float = DEFAULT_QUAD_TOL, dps: int | None = None
) -> OneSum:
    """1-sum of the series at the origin in direction theta.

    psi(x) = -(db/x) int u(z) exp(-z/x) / (z + db) dz + (exp(dg x) - 1)/(dg x)

    For S = 0 the series converges and is summed directly.

    Raises:
        SingularDirectionError: If theta is arg(beta1 - beta2)
        DomainError: If Re(exp(i theta)/x) <= |gamma2 - gamma1|
    """
    x = complex(x)
    if _same_direction(theta, singular_direction_origin(p)) and not is_trivial_stokes(p):
        raise SingularDirectionError(theta, singular_direction_origin(p))
    db, dg = p.delta_beta, p.delta_gamma

    if is_trivial_stokes(p):
        value = _sum_series(lambda k: psi_coefficients(p, k).values, x, tol)
        return OneSum(
            at=x, value=value, theta=theta, quadrature_error_estimate=0.0,
            method=SummationMethod.SERIES,
        )

    if dps is None:

        def f(z: Any) -> Any:
            return -db * phi1(dg * z) / (z + db)

    else:

        def f(z: Any) -> Any:
            return -db * mp_phi(dg * z) / (z + db)

    integral, error = laplace_ray_estimate(
        f, Ray(theta), x, tol=tol, growth=abs(dg), poles=[-db], dps=dps
    )
    return OneSum(
        at=x, value=integral + _exprel(dg * x), theta=theta, quadrature_error_estimate=error
    )


def phi_sum(
    p: Params, theta: float, x: complex, tol: float = DEFAULT_QUAD_TOL, dps: int | None = None
) -> OneSum:
    """1-sum of the series at infinity in direction theta.

    phi(x) = -x int v(p) exp(-x p) / (1 - p/dg) dp - x (exp(-db/x) - 1)/db

    Raises:
        DegenerateParametersError: If gamma1 == gamma2
        SingularDirectionError: If theta is arg(gamma2 - gamma1)
        DomainError: If Re(x exp(i theta)) <= |beta2 - beta1|
    """
    if p.gammas_equal:
        raise DegenerateParametersError("phi_sum is undefined for gamma1 == gamma2")
    x = complex(x)
    db, dg = p.delta_beta, p.delta_gamma
    if x == 0:
        raise DomainError("phi_sum needs x != 0")

    if is_trivial_stokes(p):
        value = _sum_series(lambda k: phi_coefficients(p, k).values, 1 / x, tol)
        return OneSum(
            at=x, value=value, theta=theta, quadrature_error_estimate=0.0,
            method=SummationMethod.SERIES,
        )

    if _same_direction(theta, cmath.phase(dg)):
        raise SingularDirectionError(theta, cmath.phase(dg))

    integral, error = laplace_ray_estimate(
        _omega_integrand(p, dps), Ray(theta), x, tol=tol, form=LaplaceForm.INFINITY,
        growth=abs(db), poles=[dg], dps=dps,
    )
    value = -x * integral - x * (cmath.exp(-db / x) - 1) / db
    return OneSum(at=x, value=value, theta=theta, quadrature_error_estimate=abs(x) * error)


def _omega_integrand(p: Params, dps: int | None) -> Integrand:
    db, dg = p.delta_beta, p.delta_gamma
    if dps is None:

        def f(q: Any) -> Any:
            return phi1(-db * q) / (1 - q / dg)

    else:

        def f(q: Any) -> Any:
            return mp_phi(-db * q) / (1 - q / dg)

    return f


def actual_fundamental_entry(
    p: Params,
    which: Frame,
    theta: float,
    x: complex,
    tol: float = DEFAULT_QUAD_TOL,
    dps: int | None = None,
) -> complex:
    """The 1,2-entry of the actual fundamental matrix in direction theta.

    - ORIGIN: H12(x) = x**2/db + dg x**2 int u(z) exp(-z/x)/(z + db) dz,
      so that Phi12 = exp(gamma1 x) x**-2 exp(-beta2/x) H12
    - INFINITY: P12(x) = (exp(-db/x) - 1)/db + int v(p) exp(-x p)/(1 - p/dg) dp,
      so that Phi12 = exp(gamma2 x) exp(-beta1/x) P12

    gamma1 == gamma2 gives the closed forms x**2/db and (exp(-db/x) - 1)/db.
    """
    x = complex(x)
    db, dg = p.delta_beta, p.delta_gamma
    if which is Frame.ORIGIN:
        if p.gammas_equal:
            return x * x / db
        if dps is None:

            def f(z: Any) -> Any:
                return phi1(dg * z) / (z + db)

        else:

            def f(z: Any) -> Any:
                return mp_phi(dg * z) / (z + db)

        # x * (origin-form transform) is the plain integral
        integral = x * laplace_ray(f, Ray(theta), x, tol, growth=abs(dg), poles=[-db], dps=dps)
        return x * x / db + dg * x * x * integral

    closed = (cmath.exp(-db / x) - 1) / db
    if p.gammas_equal:
        return closed
    omega = laplace_ray(
        _omega_integrand(p, dps), Ray(theta), x, tol, form=LaplaceForm.INFINITY,
        growth=abs(db), poles=[dg], dps=dps,
    )
    return closed + omega


def fundamental_solution_12(
    p: Params, which: Frame, theta: float, x: complex, tol: float = DEFAULT_QUAD_TOL
) -> complex:
    """Phi12 assembled from the 1,2-entry of the chosen frame."""
    x = complex(x)
    entry = actual_fundamental_entry(p, which, theta, x, tol)
    if which is Frame.ORIGIN:
        return cmath.exp(p.gamma1 * x - p.beta2 / x) * entry / (x * x)
    return cmath.exp(p.gamma2 * x - p.beta1 / x) * entry


def h_entry_exact(p: Params, theta: float, x: complex, tol: float = DEFAULT_QUAD_TOL) -> complex:
    """H12 = (x**2/db) L_theta[exp(dg db x / (db + z))](x), an independent route to the entry."""
    x = complex(x)
    db, dg = p.delta_beta, p.delta_gamma

    def f(z: Any) -> Any:
        return cmath.exp(dg * db * x / (db + z))

    return x * x / db * laplace_ray(f, Ray(theta), x, tol, poles=[-db])


# ============================================================================
# Stokes jump
# ============================================================================


@dataclass(frozen=True)
class JumpReport:
    """Stokes jump of Phi12 across the singular direction at the origin.

    Attributes:
        x: Evaluation point
        theta: Singular direction
        eps_angle: Half-opening of the two rays
        quadrature: Phi12 along theta - eps_angle minus along theta + eps_angle
        residue: 2 pi i (gamma2 - gamma1) u(beta1 - beta2) Phi1(x)
        abs_err: |quadrature - residue|
        rel_err: abs_err / |residue| (abs_err when the residue vanishes)
        phi1_scale: |Phi1(x)|
        sensitivity: (eps_angle, rel_err) rows
    """

    x: complex
    theta: float
    eps_angle: float
    quadrature: complex
    residue: complex
    abs_err: float
    rel_err: float
    phi1_scale: float
    sensitivity: list[tuple[float, float]] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        """The residue vanishes relative to Phi1 (S = 0 or gamma1 == gamma2)."""
        return abs(self.residue) <= 1e-8 * self.phi1_scale

    def passes(self, tol: float) -> bool:
        if self.trivial:
            return self.abs_err <= 1e-8 * self.phi1_scale
        return self.rel_err <= tol

    def to_dict(self) -> dict[str, Any]:
        return {
            "x": self.x,
            "theta": self.theta,
            "eps_angle": self.eps_angle,
            "quadrature": self.quadrature,
            "residue": self.residue,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "phi1_scale": self.phi1_scale,
            "sensitivity": [{"eps_angle": a, "rel_err": r} for a, r in self.sensitivity],
        }


def default_jump_point(p: Params, radius: float = 0.05) -> complex:
    """Point on the singular direction at the origin, |x| = radius."""
    return radius * cmath.exp(1j * singular_direction_origin(p))


def _jump_pair(
    p: Params, x: complex, eps_angle: float, tol: float, dps: int
) -> tuple[complex, complex, float]:
    db, dg = p.delta_beta, p.delta_gamma
    theta = singular_direction_origin(p)
    with mp.workdps(dps):
        xm = mp.mpc(x)
        phi1_x = mp.exp(-mp.mpc(p.beta1) / xm + mp.mpc(p.gamma1) * xm)
        u_pole = mp_phi(mp.mpc(dg) * mp.mpc(-db))
        residue = 2j * mp.pi * mp.mpc(dg) * u_pole * phi1_x
        if dg == 0:
            return 0j, complex(residue), float(abs(phi1_x))

        def f(z: Any) -> Any:
            return mp_phi(mp.mpc(dg) * z) / (z + mp.mpc(db))

        values = []
        for side in (theta - eps_angle, theta + eps_angle):
            ray = Ray(side)
            end, breaks = _ray_setup(ray, x, LaplaceForm.ORIGIN, abs(dg), [-db], tol)
            value, _ = _laplace_mp(f, ray, x, LaplaceForm.ORIGIN, end, breaks, dps)
            values.append(value)
        # origin-form values times x are the plain integrals
        delta_h = mp.mpc(dg) * xm * xm * xm * (values[0] - values[1])
        prefactor = mp.exp(mp.mpc(p.gamma1) * xm - mp.mpc(p.beta2) / xm) / (xm * xm)
        return complex(prefactor * delta_h), complex(residue), float(abs(phi1_x))


def stokes_jump_origin(
    p: Params,
    x: complex | None = None,
    eps_angle: float = DEFAULT_EPS_ANGLE,
    tol: float = 1e-6,
    dps: int = DEFAULT_JUMP_DPS,
    sensitivity: bool = True,
) -> JumpReport:
    """Stokes jump of Phi12 across arg(beta1 - beta2), two independent ways.

    (a) quadrature: the H-entry along theta - eps_angle minus along
    theta + eps_angle, transported to Phi12; (b) the residue formula
    2 pi i (gamma2 - gamma1) u(beta1 - beta2) Phi1(x). Their agreement is the
    content of the Stokes matrix at the origin.

    Args:
        p: Equation parameters
        x: Evaluation point in both ray domains (default 0.05 on the singular direction)
        eps_angle: Angle between each ray and the singular direction
        tol: Tolerance of the comparison
        dps: Working precision of the ray integrals
        sensitivity: Also report the comparison at eps_angle/2 and 2 eps_angle

    Raises:
        DomainError: If x is outside either ray domain
        QuadratureError: If a ray integral fails
    """
    if eps_angle <= 0:
        raise InvalidParametersError(f"eps_angle must be positive, got {eps_angle}")
    x = default_jump_point(p) if x is None else complex(x)
    theta = singular_direction_origin(p)
    quadrature, residue, scale = _jump_pair(p, x, eps_angle, tol * 1e-6, dps)
    abs_err = abs(quadrature - residue)
    rel_err = abs_err / abs(residue) if residue != 0 else abs_err

    rows: list[tuple[float, float]] = []
    if sensitivity:
        for factor in (0.5, 1.0, 2.0):
            angle = eps_angle * factor
            if factor == 1.0:
                rows.append((angle, rel_err))
                continue
            try:
                q, r, _ = _jump_pair(p, x, angle, tol * 1e-6, dps)
            except DomainError:
                continue
            err = abs(q - r)
            rows.append((angle, err / abs(r) if r != 0 else err))

    logger.info(f"Stokes jump at x={x}: rel_err={rel_err:.3e}")
    return JumpReport(
        x=x,
        theta=theta,
        eps_angle=eps_angle,
        quadrature=quadrature,
        residue=residue,
        abs_err=abs_err,
        rel_err=rel_err,
        phi1_scale=scale,
        sensitivity=rows,
    )


# ============================================================================
# Asymptotics and transform identities
# ============================================================================


@dataclass(frozen=True)
class GevreyFit:
    """Fitted Gevrey-1 constants: |remainder_N| <= C A**N N! |x|**N.

    Attributes:
        C: Prefactor
        A: Rate
        samples: (x, N, |remainder|) triples used in the fit
    """

    C: float  # noqa: N815
    A: float  # noqa: N815
    samples: list[tuple[complex, int, float]]

    def bound(self, x: complex, n: int) -> float:
        return self.C * self.A**n * math.factorial(n) * abs(x) ** n

    def holds(self) -> bool:
        return all(err <= self.bound(x, n) * (1 + 1e-9) for x, n, err in self.samples)


def gevrey_fit(
    p: Params,
    theta: float,
    points: Sequence[complex],
    n_max: int = 8,
    frame: Frame = Frame.ORIGIN,
    dps: int = DEFAULT_JUMP_DPS,
) -> GevreyFit:
    """Fit (C, A) to the truncation errors of a 1-sum against its series.

    For the origin, points are small x and the variable is x; at infinity,
    points are large x and the variable is 1/x.
    """
    if frame is Frame.ORIGIN:
        coefficients = psi_coefficients(p, n_max).values
    else:
        coefficients = phi_coefficients(p, n_max).values

    samples: list[tuple[complex, int, float]] = []
    for x in points:
        x = complex(x)
        if frame is Frame.ORIGIN:
            total = psi_sum(p, theta, x, tol=1e-20, dps=dps).value
            z = x
        else:
            total = phi_sum(p, theta, x, tol=1e-20, dps=dps).value
            z = 1 / x
        partial = 0j
        power = 1 + 0j
        for n, c in enumerate(coefficients, start=1):
            power *= z
            partial += c * power
            samples.append((z, n, abs(total - partial)))

    ns = np.array([n for _, n, _ in samples], dtype=float)
    scaled = np.array(
        [err / (math.factorial(n) * abs(z) ** n) for z, n, err in samples], dtype=float
    )
    scaled = np.maximum(scaled, 1e-300)
    slope, _ = np.polyfit(ns, np.log(scaled), 1)
    rate = float(math.exp(slope))
    prefactor = float(np.max(scaled / rate**ns))
    logger.debug(f"Gevrey fit: C={prefactor:.3e} A={rate:.3e} over {len(samples)} samples")
    return GevreyFit(C=prefactor, A=rate, samples=samples)


def laplace_property_residuals(
    a: complex = -1 + 0.5j,
    x: complex = 2.0,
    c: float = 0.7,
    theta: float = 0.0,
    tol: float = 1e-13,
    h: float = 1e-3,
) -> dict[str, float]:
    """Relative residuals of four Laplace-transform identities (infinity form).

    With phi(q) = phi_1(a q):
    - derivative: L[-q phi](x) = d/dx L[phi](x)
    - shift: L[exp(-c q) phi](x) = L[phi](x + c)
    - convolution: L[1 * phi](x) = L[phi](x) / x
    - primitive: L[phi'](x) = x L[phi](x) - phi(0)
    """
    ray = Ray(theta)
    growth = abs(a)

    def transform(f: Integrand, at: complex) -> complex:
        return laplace_ray(f, ray, at, tol, form=LaplaceForm.INFINITY, growth=growth)

    def phi(q: Any) -> Any:
        return bessel_kernel(a * q, 1).value

    base = transform(phi, x)

    stencil = [transform(phi, x + k * h) for k in (-2, -1, 1, 2)]
    derivative = (stencil[0] - 8 * stencil[1] + 8 * stencil[2] - stencil[3]) / (12 * h)
    lhs_derivative = transform(lambda q: -q * phi(q), x)

    lhs_shift = transform(lambda q: cmath.exp(-c * q) * phi(q), x)
    rhs_shift = transform(phi, x + c)

    lhs_convolution = transform(lambda q: (bessel_kernel(a * q, 0).value - 1) / a, x)

    lhs_primitive = transform(lambda q: a * bessel_kernel(a * q, 2).value, x)
    rhs_primitive = x * base - 1

    def rel(lhs: complex, rhs: complex) -> float:
        return abs(lhs - rhs) / max(abs(rhs), 1e-300)

    return {
        "derivative": rel(lhs_derivative, derivative),
        "shift": rel(lhs_shift, rhs_shift),
        "convolution": rel(lhs_convolution, base / x),
        "primitive": rel(lhs_primitive, rhs_primitive),
    }


def jump_target(p: Params) -> complex:
    """2 pi i (gamma2 - gamma1) u(beta1 - beta2), the coefficient of Phi1 in the jump."""
    return 2j * math.pi * p.delta_gamma * (-bessel_sum_S(p))
