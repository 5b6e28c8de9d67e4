"""Unit tests for resonance residues, monodromy decompositions and the eps -> 0 limit."""

import cmath
import math

import numpy as np
import pytest

from stokes_unfold.exceptions import (
    IncompatibleParametersError,
    MultivaluedIntegrandError,
    ResonanceMismatchError,
)
from stokes_unfold.model import char_exponents, classify_resonance, resonant_params
from stokes_unfold.stokes import stokes_infinity, stokes_origin
from stokes_unfold.types import Epsilon, Params, Resonance, ResonanceKind, SingularPoint
from stokes_unfold.unfold import (
    MAX_SWEEP_N,
    all_decompositions,
    case_for_signs,
    d_coefficient,
    limit_closed_form,
    limit_experiment,
    monodromy_decomp,
    residue_by_leibniz,
    unfolded_stokes,
)

RESONANT_KINDS = [ResonanceKind.A1, ResonanceKind.A2, ResonanceKind.A3, ResonanceKind.A4]

# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture
def eps() -> Epsilon:
    """sqrt(eps) = 1/2, so eps = 1/4."""
    return Epsilon(0.5)


@pytest.fixture
def case_three() -> Params:
    """beta2 - beta1 = 2 and gamma1 - gamma2 = 2."""
    return Params(beta1=0, beta2=2, gamma1=0, gamma2=-2)


def _first_order_residues(kind: ResonanceKind, s: float) -> dict[SingularPoint, float]:
    """Residues for n_beta = n_gamma = 1, worked out by hand from the rational ratio."""
    minus = 2 * s / (1 - s * s) ** 2
    plus = 2 * s / (1 + s * s) ** 2
    table = {
        ResonanceKind.A1: {SingularPoint.L: -minus, SingularPoint.LL: minus},
        ResonanceKind.A2: {SingularPoint.L: plus, SingularPoint.RR: -plus},
        ResonanceKind.A3: {SingularPoint.R: -plus, SingularPoint.LL: plus},
        ResonanceKind.A4: {SingularPoint.R: minus, SingularPoint.RR: -minus},
    }
    return table[kind]


# ============================================================================
# Closed-form residues
# ============================================================================


class TestDCoefficient:
    """Tests for the closed-form residues d."""

    @pytest.mark.parametrize("kind", RESONANT_KINDS)
    def test_first_order_values(self, eps: Epsilon, kind: ResonanceKind) -> None:
        """Test n_beta = n_gamma = 1 against hand-computed residues."""
        p = resonant_params(kind, 1, 1, eps)
        r = Resonance(kind, 1, 1)
        for point, expected in _first_order_residues(kind, 0.5).items():
            assert d_coefficient(p, eps, r, point) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("kind", RESONANT_KINDS)
    @pytest.mark.parametrize(("n_beta", "n_gamma"), [(1, 2), (2, 1), (3, 3), (5, 2)])
    def test_matches_leibniz_rule(
        self, eps: Epsilon, kind: ResonanceKind, n_beta: int, n_gamma: int
    ) -> None:
        """Test the double sums against the Leibniz expansion of the factor product."""
        p = resonant_params(kind, n_beta, n_gamma, eps, beta1=0.3 - 0.2j, gamma1=0.1j)
        r = Resonance(kind, n_beta, n_gamma)
        for point in r.log_points:
            closed = d_coefficient(p, eps, r, point)
            assert closed == pytest.approx(residue_by_leibniz(p, eps, point), rel=1e-8)

    def test_module_example(self) -> None:
        """Test the module docstring example: A1 (2, 2) at sqrt(eps) = 1/2."""
        p, e = Params(0, 2, 2, 0), Epsilon(0.5)
        r = classify_resonance(p, e)
        assert (r.kind, r.n_beta, r.n_gamma) == (ResonanceKind.A1, 2, 2)
        d = d_coefficient(p, e, r, SingularPoint.L)
        assert d != 0
        assert abs(d - residue_by_leibniz(p, e, SingularPoint.L)) < 1e-8 * abs(d)

    def test_non_logarithmic_points_vanish(self, eps: Epsilon) -> None:
        """Test points outside the logarithmic pair give 0."""
        p = resonant_params(ResonanceKind.A1, 2, 2, eps)
        r = Resonance(ResonanceKind.A1, 2, 2)
        assert d_coefficient(p, eps, r, SingularPoint.R) == 0
        assert d_coefficient(p, eps, r, SingularPoint.RR) == 0

    def test_equal_gammas_vanish(self, eps: Epsilon) -> None:
        """Test n_gamma = 0 gives no logarithms."""
        p = resonant_params(ResonanceKind.A1, 2, 0, eps)
        r = Resonance(ResonanceKind.A1, 2, 0)
        assert d_coefficient(p, eps, r, SingularPoint.L) == 0

    def test_wrong_resonance_raises(self, eps: Epsilon) -> None:
        """Test a resonance the parameters do not satisfy is refused."""
        p = resonant_params(ResonanceKind.A1, 1, 1, eps)
        with pytest.raises(ResonanceMismatchError):
            d_coefficient(p, eps, Resonance(ResonanceKind.A2, 1, 1), SingularPoint.L)
        with pytest.raises(ResonanceMismatchError):
            d_coefficient(p, eps, Resonance(ResonanceKind.NONE), SingularPoint.L)

    def test_leibniz_needs_integer_exponent(self, eps: Epsilon) -> None:
        """Test a non-integer local exponent is refused."""
        with pytest.raises(MultivaluedIntegrandError):
            residue_by_leibniz(Params(0, 0.7, 0, 1), eps, SingularPoint.L)


# ============================================================================
# Monodromy decompositions
# ============================================================================


class TestMonodromyDecomp:
    """Tests for M = exponent part times unipotent part."""

    @pytest.mark.parametrize("kind", RESONANT_KINDS)
    def test_parts_commute(self, eps: Epsilon, kind: ResonanceKind) -> None:
        """Test the exponent and unipotent parts commute at every point."""
        p = resonant_params(kind, 2, 3, eps, beta1=0.4, gamma1=-0.2j)
        r = classify_resonance(p, eps)
        for decomp in all_decompositions(p, eps, r):
            assert decomp.commutator_norm() < 1e-12

    def test_determinant(self, eps: Epsilon) -> None:
        """Test det M = exp(2 pi i (rho_1 + rho_2 - 1))."""
        p = resonant_params(ResonanceKind.A3, 2, 1, eps, beta1=0.25, gamma1=0.5)
        r = classify_resonance(p, eps)
        for decomp in all_decompositions(p, eps, r):
            assert decomp.determinant() == pytest.approx(decomp.expected_determinant(), rel=1e-12)

    def test_point_order(self, eps: Epsilon) -> None:
        """Test decompositions come back in R, L, RR, LL order."""
        p = resonant_params(ResonanceKind.A1, 1, 1, eps)
        r = classify_resonance(p, eps)
        points = [decomp.point for decomp in all_decompositions(p, eps, r)]
        assert points == [SingularPoint.R, SingularPoint.L, SingularPoint.RR, SingularPoint.LL]

    def test_exponent_part(self, eps: Epsilon) -> None:
        """Test the diagonal entries come from the characteristic exponents."""
        p = resonant_params(ResonanceKind.A2, 1, 2, eps, gamma1=0.3)
        r = classify_resonance(p, eps)
        decomp = monodromy_decomp(p, eps, r, SingularPoint.RR)
        rho1, rho2 = char_exponents(p, eps).rho[SingularPoint.RR]
        assert decomp.exponent_part[0, 0] == pytest.approx(cmath.exp(2j * math.pi * rho1))
        assert decomp.exponent_part[1, 1] == pytest.approx(cmath.exp(2j * math.pi * (rho2 - 1)))
        assert decomp.to_dict()["point"] == "RR"

    def test_unfolded_stokes(self, eps: Epsilon) -> None:
        """Test exp(2 pi i T) = [[1, 2 pi i d], [0, 1]]."""
        p = resonant_params(ResonanceKind.A4, 1, 1, eps)
        r = Resonance(ResonanceKind.A4, 1, 1)
        d = d_coefficient(p, eps, r, SingularPoint.R)
        matrix = unfolded_stokes(p, eps, r, SingularPoint.R)
        assert np.allclose(matrix, [[1, 2j * math.pi * d], [0, 1]])
        decomp = monodromy_decomp(p, eps, r, SingularPoint.R)
        assert np.allclose(decomp.unipotent, matrix)
        assert np.allclose(decomp.T, [[0, d], [0, 0]])


# ============================================================================
# Limit eps -> 0
# ============================================================================


class TestLimit:
    """Tests for the convergence of d to the Stokes multipliers."""

    def test_closed_form_limit_matches_stokes(self, case_three: Params) -> None:
        """Test 2 pi i times the limits equals (mu_0, mu_infinity)."""
        origin, infinity = limit_closed_form(case_three)
        assert 2j * math.pi * origin == pytest.approx(stokes_origin(case_three).mu)
        assert 2j * math.pi * infinity == pytest.approx(stokes_infinity(case_three).mu)
        assert limit_closed_form(Params(0, 1, 0.5, 0.5)) == (0, 0)

    def test_case_for_signs(self) -> None:
        """Test the four sign patterns."""
        assert case_for_signs(Params(0, 1, 0, 1)) == 1
        assert case_for_signs(Params(0, -1, 0, -1)) == 2
        assert case_for_signs(Params(0, 1, 0, -1)) == 3
        assert case_for_signs(Params(0, -1, 0, 1)) == 4
        with pytest.raises(IncompatibleParametersError):
            case_for_signs(Params(0, 1j, 0, 1))

    def test_convergence_sweep(self, case_three: Params) -> None:
        """Test the errors at n = 64 are below 5% of mu and below those at n = 2."""
        table = limit_experiment(case_three, 3, [2, 4, 8, 16, 32, 64])
        assert table.kind is ResonanceKind.A1
        assert table.passes()
        pairs = ((SingularPoint.L, table.mu_origin), (SingularPoint.LL, table.mu_infinity))
        for point, mu in pairs:
            errors = table.errors(point)
            assert len(errors) == 6
            assert errors[-1] < errors[0]
            assert errors[-1] < 0.05 * abs(mu)

    def test_rows_are_ordered(self, case_three: Params) -> None:
        """Test rows follow n order with the origin-side point first."""
        table = limit_experiment(case_three, None, [8, 2, 4, 2])
        assert [(row.n, row.point) for row in table.rows] == [
            (2, SingularPoint.L),
            (2, SingularPoint.LL),
            (4, SingularPoint.L),
            (4, SingularPoint.LL),
            (8, SingularPoint.L),
            (8, SingularPoint.LL),
        ]
        assert table.rows[0].sqrt_eps == pytest.approx(0.5)
        assert table.to_dict()["case"] == 3

    def test_case_mismatch(self, case_three: Params) -> None:
        """Test a case that contradicts the signs is refused."""
        with pytest.raises(IncompatibleParametersError):
            limit_experiment(case_three, 1, [2])

    @pytest.mark.parametrize("n_list", [[], [MAX_SWEEP_N + 1], [0], [1]])
    def test_invalid_n_list(self, case_three: Params, n_list: list[int]) -> None:
        """Test empty lists, out-of-range n and eps**2 == 1 are refused."""
        with pytest.raises(IncompatibleParametersError):
            limit_experiment(case_three, None, n_list)

    def test_incompatible_ratio(self) -> None:
        """Test n values giving a non-integer n_gamma are refused."""
        with pytest.raises(IncompatibleParametersError):
            limit_experiment(Params(0, 2, 0, 3), None, [3])
