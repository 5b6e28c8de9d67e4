"""Unit tests for the special-function layer."""

import cmath
import math
from fractions import Fraction

import pytest
from scipy import integrate, special

from stokes_unfold.exceptions import (
    ConvergenceError,
    InvalidParametersError,
    PoleError,
    UndefinedRatioError,
)
from stokes_unfold.specfun import (
    bessel_j1_zero,
    bessel_kernel,
    bessel_kernel_phi1,
    binomial,
    gamma_ratio,
    integer_gamma_ratio,
    is_pole,
    log_gamma,
    mp_bessel_kernel,
    nearest_integer,
    phi1,
    rising_factorial,
)

# ============================================================================
# Integer detection
# ============================================================================


class TestNearestInteger:
    """Tests for integer snapping."""

    def test_exact_and_near_integers(self) -> None:
        """Test values within tolerance snap to the integer."""
        assert nearest_integer(3) == 3
        assert nearest_integer(-2 + 1e-14j) == -2
        assert nearest_integer(4.0000000000001) == 4

    def test_non_integers(self) -> None:
        """Test non-integers and complex values are rejected."""
        assert nearest_integer(2.5) is None
        assert nearest_integer(1 + 0.1j) is None

    def test_poles(self) -> None:
        """Test pole detection covers 0 and the negative integers only."""
        assert is_pole(0)
        assert is_pole(-7)
        assert not is_pole(1)
        assert not is_pole(-0.5)


# ============================================================================
# Gamma family
# ============================================================================


class TestLogGamma:
    """Tests for log_gamma."""

    def test_real_values(self) -> None:
        """Test known real values."""
        assert log_gamma(5) == pytest.approx(math.log(24))
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi))

    def test_exponential_matches_gamma(self) -> None:
        """Test exp(log_gamma(z)) reproduces Gamma(z) off the real axis."""
        for z in (1 + 1j, 2.5 - 3j, -1.5 + 0.5j):
            assert cmath.exp(log_gamma(z)) == pytest.approx(complex(special.gamma(z)), rel=1e-12)

    @pytest.mark.parametrize("z", [0, -1, -3])
    def test_poles_raise(self, z: int) -> None:
        """Test evaluation at a pole raises PoleError."""
        with pytest.raises(PoleError):
            log_gamma(z)


class TestGammaRatio:
    """Tests for gamma_ratio and its exact integer variant."""

    def test_integer_shift_is_a_product(self) -> None:
        """Test Gamma(z+a)/Gamma(z+b) for integer a - b."""
        assert gamma_ratio(0, 3, 1) == pytest.approx(2)
        assert gamma_ratio(0.5, 2, 0) == pytest.approx(0.5 * 1.5)
        assert gamma_ratio(1.3, 0.2, 0.2) == 1

    def test_poles_cancel(self) -> None:
        """Test Gamma(-2)/Gamma(-1) is the finite limit 1/(-2)."""
        assert gamma_ratio(-2, 0, 1) == pytest.approx(-0.5)

    def test_uncancelled_numerator_pole(self) -> None:
        """Test a pole left in the numerator raises."""
        with pytest.raises(UndefinedRatioError):
            gamma_ratio(0, -2, 0.5)
        with pytest.raises(UndefinedRatioError):
            gamma_ratio(0, -1, 1)

    def test_both_poles_with_integer_shift(self) -> None:
        """Test Gamma(-3)/Gamma(0) is the finite limit -1/6."""
        assert gamma_ratio(0, -3, 0) == pytest.approx(-1 / 6)

    def test_denominator_pole_gives_zero(self) -> None:
        """Test a pole in the denominator alone gives 0."""
        assert gamma_ratio(0, 0.5, -1) == 0

    def test_generic_ratio(self) -> None:
        """Test a non-integer shift against scipy."""
        expected = special.gamma(0.3) / special.gamma(0.7)
        assert gamma_ratio(0, 0.3, 0.7) == pytest.approx(expected, rel=1e-13)

    def test_integer_gamma_ratio(self) -> None:
        """Test exact rational values."""
        assert integer_gamma_ratio(5, 2) == Fraction(24)
        assert integer_gamma_ratio(2, 5) == Fraction(1, 24)
        assert integer_gamma_ratio(3, 0) == 0
        with pytest.raises(UndefinedRatioError):
            integer_gamma_ratio(0, 3)


class TestElementaryHelpers:
    """Tests for rising factorials and binomials."""

    def test_rising_factorial(self) -> None:
        """Test (a)^(n) products."""
        assert rising_factorial(1, 4) == 24
        assert rising_factorial(0.5, 0) == 1
        assert rising_factorial(-2, 3) == 0

    def test_rising_factorial_negative_n(self) -> None:
        """Test n < 0 is rejected."""
        with pytest.raises(InvalidParametersError):
            rising_factorial(1, -1)

    def test_binomial(self) -> None:
        """Test generalized binomial coefficients."""
        assert binomial(5, 2) == pytest.approx(10)
        assert binomial(0.5, 2) == pytest.approx(-0.125)
        assert binomial(-3, 3) == pytest.approx(-10)
        assert binomial(2.5, -1) == 0


# ============================================================================
# Bessel kernels
# ============================================================================


class TestBesselKernel:
    """Tests for the phi_nu series."""

    def test_value_at_zero(self) -> None:
        """Test phi_1(0) = 1 and phi_2(0) = 1/2."""
        assert phi1(0) == 1
        assert bessel_kernel(0, 2).value == pytest.approx(0.5)

    @pytest.mark.parametrize("z", [0.5, 2.0, 3.0 + 1.0j, 7.5, 1.0 - 2.0j])
    def test_matches_j1(self, z: complex) -> None:
        """Test phi_1(-(z/2)**2) = J_1(z)/(z/2) against scipy."""
        expected = complex(special.jv(1, z)) / (z / 2)
        assert phi1(-((z / 2) ** 2)) == pytest.approx(expected, rel=1e-12)

    def test_cancellation_uses_extended_precision(self) -> None:
        """Test a large negative argument is redone in mpmath and stays accurate."""
        result = bessel_kernel_phi1(-400.0)
        expected = special.jv(1, 40.0) / 20.0
        assert result.extended_precision
        assert result.value.real == pytest.approx(expected, rel=1e-10)

    def test_positive_argument_uses_doubles(self) -> None:
        """Test positive arguments need no extended precision."""
        result = bessel_kernel_phi1(1.0)
        assert not result.extended_precision
        assert result.terms_used > 1
        assert result.value.real == pytest.approx(1.5906368546373291, rel=1e-13)

    def test_derivative_raises_order(self) -> None:
        """Test d/dw phi_1 = phi_2 by central differences."""
        w, h = 0.8 - 0.3j, 1e-5
        derivative = (phi1(w + h) - phi1(w - h)) / (2 * h)
        assert derivative == pytest.approx(bessel_kernel(w, 2).value, rel=1e-8)

    def test_integral_lowers_order(self) -> None:
        """Test the integral of phi_1 from 0 to w is phi_0(w) - 1."""
        w = 1.5
        integral, _ = integrate.quad(lambda t: phi1(t).real, 0, w)
        assert integral == pytest.approx(bessel_kernel(w, 0).value.real - 1, rel=1e-12)

    def test_mpmath_route_agrees(self) -> None:
        """Test the 0F1 route agrees with the series."""
        assert mp_bessel_kernel(1.0 + 1.0j, 1, 30) == pytest.approx(phi1(1.0 + 1.0j), rel=1e-14)

    def test_invalid_arguments(self) -> None:
        """Test negative order and non-positive tolerance are rejected."""
        with pytest.raises(InvalidParametersError):
            bessel_kernel(1.0, -1)
        with pytest.raises(InvalidParametersError):
            bessel_kernel(1.0, 1, tol=0)

    def test_overflow_raises(self) -> None:
        """Test an argument beyond double range raises ConvergenceError."""
        with pytest.raises(ConvergenceError):
            bessel_kernel(1e300)


class TestBesselZero:
    """Tests for the first zero of J_1."""

    def test_value(self) -> None:
        """Test the root against the tabulated value and scipy."""
        z1 = bessel_j1_zero()
        assert z1 == pytest.approx(3.8317059702075125, abs=1e-12)
        assert abs(special.jv(1, z1)) < 1e-13

    def test_phi1_vanishes_there(self) -> None:
        """Test phi_1(-(z1/2)**2) vanishes."""
        z1 = bessel_j1_zero()
        assert abs(phi1(-((z1 / 2) ** 2))) < 1e-12
