"""Brute-force verifiers that use no closed-form resonance formulas.

- residue_contour: trapezoidal rule for the residue of Phi2/Phi1 on a circle
- phi12_quadrature: Phi12 = Phi1 * integral of Phi2/Phi1 along a segment
- monodromy_ode: continuation of Y' = [[a1, 1], [0, a2]] Y around a loop

Design Philosophy:
- Independent of unfold: only the factorized solutions from model are shared
- Deterministic geometry (squares around singular points, straight segments)
- Branches of Phi2/Phi1 are continued relative to the evaluation point, so
  the integrand is continuous along every segment
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from mpmath import mp
from scipy import integrate

from .exceptions import (
    IntegrationStepError,
    MultivaluedIntegrandError,
    NonIntegrableEndpointError,
    PathError,
)
from .model import PerturbedEquation
from .specfun import nearest_integer
from .types import Epsilon, Frame, LinearFactor, Matrix2C, Params, SingularPoint

logger = logging.getLogger(__name__)

DEFAULT_NODES = 512
DEFAULT_CONTOUR_TOL = 1e-8
DEFAULT_ODE_TOL = 1e-11
DEFAULT_PATH_DPS = 30
_CLEARANCE = 1e-3


# ============================================================================
# Contour residues
# ============================================================================


def _residue_contour(
    p: Params,
    e: Epsilon,
    point: SingularPoint,
    radius: float | None,
    n_nodes: int,
    tol: float,
) -> tuple[complex, float]:
    """Trapezoidal residue and the magnitude scale max|f| * radius."""
    if n_nodes < 8:
        raise PathError(f"n_nodes must be at least 8, got {n_nodes}")
    eq = PerturbedEquation(p, e)
    points = eq.points
    gap = points.nearest_gap(point)
    radius = 0.5 * gap if radius is None else radius
    if not 0 < radius < gap:
        raise PathError(
            f"Circle of radius {radius:.3g} around {point.value} "
            f"must stay inside the gap {gap:.3g}",
            recovery_suggestion=(
                "Use a radius smaller than the distance to the nearest other singular point"
            ),
        )

    factors = eq.ratio_factors()
    inside = factors[point]
    mismatch = abs(cmath.exp(2j * math.pi * inside.exponent) - 1)
    if mismatch > tol:
        raise MultivaluedIntegrandError(mismatch)
    power = nearest_integer(inside.exponent, 1e-6)
    assert power is not None

    center = inside.root
    angles = 2 * np.pi * np.arange(n_nodes) / n_nodes
    unit = np.exp(1j * angles)
    w = radius * unit
    values = complex(inside.coef) ** power * w**power

    for pt, factor in factors.items():
        if pt == point:
            continue
        c = factor.coef * center + factor.const
        values = values * complex(c**factor.exponent) * np.exp(
            factor.exponent * np.log(1 + factor.coef * w / c)
        )

    residue = complex(radius / n_nodes * np.sum(values * unit))
    scale = float(np.max(np.abs(values)) * radius)
    logger.debug(
        f"contour residue at {point.value}: r={radius:.3g} nodes={n_nodes} value={residue}"
    )
    return residue, scale


def residue_contour(
    p: Params,
    e: Epsilon,
    point: SingularPoint,
    radius: float | None = None,
    n_nodes: int = DEFAULT_NODES,
    tol: float = DEFAULT_CONTOUR_TOL,
) -> complex:
    """Residue of Phi2/Phi1 at a singular point by the trapezoidal rule on a circle.

    The integrand is single-valued on the circle only when the local exponent
    is an integer, which is the resonance condition at that point.

    Args:
        p: Equation parameters
        e: Perturbation parameter
        point: Singular point to encircle
        radius: Circle radius (default half the distance to the nearest other point)
        n_nodes: Number of equispaced nodes
        tol: Endpoint mismatch tolerance

    Raises:
        MultivaluedIntegrandError: If the local exponent is not an integer
        PathError: If the circle would enclose another singular point
    """
    value, _ = _residue_contour(p, e, point, radius, n_nodes, tol)
    return value


def residue_contour_with_scale(
    p: Params,
    e: Epsilon,
    point: SingularPoint,
    radius: float | None = None,
    n_nodes: int = DEFAULT_NODES,
    tol: float = DEFAULT_CONTOUR_TOL,
) -> tuple[complex, float]:
    """residue_contour plus the roundoff scale max|f| * radius of the sum."""
    return _residue_contour(p, e, point, radius, n_nodes, tol)


# ============================================================================
# Path quadrature
# ============================================================================


def _segment_distance(a: complex, b: complex, z: complex) -> float:
    direction = b - a
    if direction == 0:
        return abs(z - a)
    t = ((z - a) * direction.conjugate()).real / abs(direction) ** 2
    t = min(1.0, max(0.0, t))
    return abs(a + t * direction - z)


def frame_base(p: Params, e: Epsilon, frame: Frame) -> SingularPoint:
    """Base point of the Phi12 integral, chosen where Phi2/Phi1 is integrable.

    Origin frame: R when Re((beta2 - beta1)/(2 sqrt(eps))) > 0, else L.
    Infinity frame: RR when Re((gamma2 - gamma1)/(2 sqrt(eps))) < 0, else LL.
    """
    two_s = 2 * e.sqrt_eps
    if frame is Frame.ORIGIN:
        return SingularPoint.R if (p.delta_beta / two_s).real > 0 else SingularPoint.L
    return SingularPoint.RR if (p.delta_gamma / two_s).real < 0 else SingularPoint.LL


def _continued_ratio(
    factors: dict[SingularPoint, LinearFactor], base: SingularPoint, x: complex
) -> tuple[complex, list[tuple[LinearFactor, complex]]]:
    at_x = math.prod((f(x) for f in factors.values()), start=1 + 0j)
    others = [(f, f.coef * x + f.const) for pt, f in factors.items() if pt != base]
    return at_x, others


def phi12_quadrature(
    p: Params,
    e: Epsilon,
    x: complex,
    frame: Frame = Frame.ORIGIN,
    dps: int = DEFAULT_PATH_DPS,
) -> complex:
    """Phi12(x) = Phi1(x) times the integral of Phi2/Phi1 from the frame's base point to x.

    The path is the straight segment from the base point. The substitution
    z = base + tau**q (x - base) smooths the algebraic endpoint singularity
    and every other factor is continued from its principal value at x.

    Raises:
        NonIntegrableEndpointError: If the exponent at the base point is not > -1
        PathError: If the segment passes through another singular point
    """
    eq = PerturbedEquation(p, e)
    x = complex(x)
    base_point = frame_base(p, e, frame)
    base = eq.points.at(base_point)
    factors = eq.ratio_factors()
    nu = factors[base_point].exponent
    if nu.real <= -1:
        raise NonIntegrableEndpointError(nu)

    for pt, where in eq.points.items():
        if pt == base_point:
            continue
        if _segment_distance(base, x, where) <= _CLEARANCE * eq.points.min_pairwise_distance():
            raise PathError(
                f"Segment from {base_point.value} to x={x} passes through {pt.value}",
                recovery_suggestion=(
                    "Pick x so that the straight path from the base point "
                    "avoids other singular points"
                ),
            )
    if x == base:
        return 0j

    phi1_x = eq.solution(1, x)
    ratio_x, others = _continued_ratio(factors, base_point, x)
    integer_nu = nearest_integer(nu, 1e-12)
    q = 1 if integer_nu is not None and integer_nu >= 0 else max(1, math.ceil(1 / (nu.real + 1)))

    with mp.workdps(dps):
        xm = mp.mpc(x)
        bm = mp.mpc(base)
        span = xm - bm
        num = mp.mpc(nu)
        prefactor = mp.mpc(ratio_x)
        other_data = [(mp.mpc(f.coef), mp.mpc(c_x), mp.mpc(f.exponent)) for f, c_x in others]

        def integrand(tau: Any) -> Any:
            u = tau**q
            z = bm + u * span
            value = prefactor * u**num
            for coef, c_x, expo in other_data:
                value *= mp.exp(expo * mp.log(1 + coef * (z - xm) / c_x))
            return value * q * tau ** (q - 1) * span

        total = mp.quad(integrand, [0, 1])
        logger.debug(f"phi12 from {base_point.value} to x={x}: q={q} integral={complex(total)}")
        return complex(phi1_x * complex(total))


# ============================================================================
# Loops and frames
# ============================================================================


def _winding(vertices: Sequence[complex], z: complex) -> int:
    total = 0.0
    for a, b in zip(vertices, vertices[1:]):
        total += cmath.phase((b - z) / (a - z))
    return round(total / (2 * math.pi))


@dataclass(frozen=True)
class Loop:
    """Closed polygonal loop with a base point.

    Attributes:
        base: Start and end point
        vertices: Polygon vertices, first and last equal to base
        enclosed: Singular points with winding number +1
        winding: Winding number around each singular point
    """

    base: complex
    vertices: list[complex]
    enclosed: frozenset[SingularPoint]
    winding: dict[SingularPoint, int] = field(default_factory=dict)

    @classmethod
    def from_vertices(cls, vertices: Sequence[complex], eps: Epsilon) -> Loop:
        """Validate a closed polygon and compute what it encloses.

        Raises:
            PathError: If the polygon is open, passes too close to a singular
                point, or winds other than 0 or +1 around one
        """
        verts = [complex(v) for v in vertices]
        if len(verts) < 2 or verts[0] != verts[-1]:
            raise PathError("Loop must be closed (last vertex equal to the base)")
        points = eps.points
        clearance = _CLEARANCE * points.min_pairwise_distance()
        winding: dict[SingularPoint, int] = {}
        for pt, where in points.items():
            for a, b in zip(verts, verts[1:]):
                if _segment_distance(a, b, where) <= clearance:
                    raise PathError(
                        f"Loop passes within {clearance:.2e} of {pt.value}",
                        recovery_suggestion="Move the loop further away from the singular points",
                    )
            number = _winding(verts, where) if len(verts) > 2 else 0
            if number not in (0, 1):
                raise PathError(f"Loop winds {number} times around {pt.value}")
            winding[pt] = number
        enclosed = frozenset(pt for pt, number in winding.items() if number == 1)
        return cls(base=verts[0], vertices=verts, enclosed=enclosed, winding=winding)

    @classmethod
    def square(cls, center: complex, corner_distance: float, eps: Epsilon) -> Loop:
        """Counterclockwise square with corners at corner_distance from center."""
        half = corner_distance / math.sqrt(2)
        corners = [center + half * c for c in (1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j)]
        return cls.from_vertices([*corners, corners[0]], eps)

    @classmethod
    def around(cls, point: SingularPoint, eps: Epsilon, base: complex | None = None) -> Loop:
        """Square around one singular point, corners at half the nearest gap.

        With a base point the loop runs from the base to the nearest corner,
        once around, and back along the same segment.
        """
        points = eps.points
        center = points.at(point)
        half = 0.5 * points.nearest_gap(point) / math.sqrt(2)
        corners = [center + half * c for c in (1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j)]
        if base is None:
            return cls.from_vertices([*corners, corners[0]], eps)
        base = complex(base)
        start = min(range(4), key=lambda i: abs(corners[i] - base))
        ordered = corners[start:] + corners[:start]
        return cls.from_vertices([base, *ordered, ordered[0], base], eps)

    @classmethod
    def empty(cls, base: complex, eps: Epsilon) -> Loop:
        """The constant loop at base."""
        return cls.from_vertices([base, base], eps)

    def compose(self, other: Loop, eps: Epsilon) -> Loop:
        """This loop followed by another with the same base."""
        if self.base != other.base:
            raise PathError("Composed loops must share a base point")
        return Loop.from_vertices([*self.vertices, *other.vertices[1:]], eps)


@dataclass(frozen=True)
class FundamentalFrame:
    """Values of Y = [[Phi1, Phi12], [0, Phi2]] at a base point.

    Attributes:
        base: Base point
        Y0: 2x2 matrix of the frame at the base
        which: Frame the Phi12 integral is attached to
    """

    base: complex
    Y0: Matrix2C  # noqa: N815
    which: Frame

    def __post_init__(self) -> None:
        if abs(np.linalg.det(self.Y0)) == 0:
            raise PathError("Fundamental frame is singular at the base point")


def fundamental_frame(
    p: Params, e: Epsilon, base: complex, frame: Frame = Frame.ORIGIN
) -> FundamentalFrame:
    """Frame at base with Phi2 = Phi1 * (Phi2/Phi1), consistent with phi12_quadrature."""
    eq = PerturbedEquation(p, e)
    base = complex(base)
    phi1 = eq.solution(1, base)
    ratio = math.prod((f(base) for f in eq.ratio_factors().values()), start=1 + 0j)
    phi12 = phi12_quadrature(p, e, base, frame)
    y0 = np.array([[phi1, phi12], [0, phi1 * ratio]], dtype=np.complex128)
    return FundamentalFrame(base=base, Y0=y0, which=frame)


# ============================================================================
# ODE continuation
# ============================================================================


def continue_along(
    p: Params, e: Epsilon, vertices: Sequence[complex], y0: Matrix2C, tol: float = DEFAULT_ODE_TOL
) -> Matrix2C:
    """Continue Y' = [[a1, 1], [0, a2]] Y along a polygonal path."""
    eq = PerturbedEquation(p, e)
    y = np.asarray(y0, dtype=np.complex128).reshape(4)

    for a, b in zip(vertices, vertices[1:]):
        if a == b:
            continue
        step = b - a

        def rhs(t: float, flat: np.ndarray, a: complex = a, step: complex = step) -> np.ndarray:
            z = a + t * step
            m = np.array([[eq.a(1, z), 1], [0, eq.a(2, z)]], dtype=np.complex128)
            return (m @ flat.reshape(2, 2) * step).reshape(4)

        result = integrate.solve_ivp(
            rhs, (0.0, 1.0), y, method="DOP853", rtol=tol, atol=tol * 1e-3
        )
        if result.status != 0:
            raise IntegrationStepError(
                f"Continuation failed on segment {a} -> {b}: {result.message}"
            )
        y = result.y[:, -1]
        logger.debug(f"segment {a} -> {b}: {result.nfev} evaluations")
    return y.reshape(2, 2)


def monodromy_ode(
    p: Params,
    e: Epsilon,
    loop: Loop,
    frame: FundamentalFrame,
    tol: float = DEFAULT_ODE_TOL,
) -> Matrix2C:
    """Numerical monodromy M with Y_final = Y0 M, in the basis of the frame.

    Raises:
        PathError: If the frame is not based at the loop's base point
        IntegrationStepError: If the integrator fails near a singular point
    """
    if abs(frame.base - loop.base) > 1e-14 * max(1.0, abs(loop.base)):
        raise PathError("Frame base must equal the loop base")
    final = continue_along(p, e, loop.vertices, frame.Y0, tol)
    return np.linalg.solve(frame.Y0, final)


def loop_for_points(
    points: Sequence[SingularPoint], eps: Epsilon, base: complex
) -> Loop:
    """Composition of based loops around each point, in order."""
    if not points:
        return Loop.empty(base, eps)
    loop = Loop.around(points[0], eps, base)
    for point in points[1:]:
        loop = loop.compose(Loop.around(point, eps, base), eps)
    return loop


def default_base(eps: Epsilon) -> complex:
    """Base point above the real axis, clear of all singular points."""
    s = abs(eps.sqrt_eps)
    return 1.2j * s * cmath.exp(1j * cmath.phase(eps.sqrt_eps))
