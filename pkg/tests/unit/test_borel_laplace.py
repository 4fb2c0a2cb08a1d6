"""Tests for the formal transformation and its Borel-Laplace sums."""

import math

import numpy as np
import pytest

from confluence_kit.borel_laplace import (
    BorelSeries,
    CanonicalSolution,
    DirectionClass,
    confluent_transform,
    continue_U,
    formal_coeffs,
    gevrey_fit,
    laplace_stokes_limit,
    stokes_from_laplace,
    tilde_transform,
)
from confluence_kit.closed_form import stokes_limit
from confluence_kit.cplx_core import det, deviation, norm_inf
from confluence_kit.exceptions import (
    ConfigError,
    ConvergenceError,
    PathError,
    ResonanceError,
    SectorError,
)
from confluence_kit.hg_model import HGParams
from confluence_kit.series_solutions import confluent_column

EXAMPLE = HGParams((0.3, 0.7), (1.2,))
CUBIC = HGParams((0.2, 0.45, 0.8), (1.3, 1.65))

A3 = np.array(
    [[0.3, 0.1, 0.2], [0.05, 0.7, 0.4], [0.6, 0.2, -0.5]], dtype=np.complex128
)
B3 = np.diag([0.0, 0.0, 1.0]).astype(np.complex128)

QUARTER = math.pi / 4


def _pochhammer_sum(ft, z, rho, order):
    """Column c: sum_k T_k[:, c] (rho z - lambda_c)^k / (a_c + rho + 1)_k."""
    w = rho * z - np.diag(ft.B)
    a = np.diag(ft.A)
    out = np.zeros((ft.n, ft.n), dtype=np.complex128)
    factor = np.ones(ft.n, dtype=np.complex128)
    for k in range(order + 1):
        out += ft.coefficient(k) * factor
        factor = factor * w / (a + rho + 1 + k)
    return out


@pytest.fixture(scope="module")
def example_series():
    return BorelSeries(tilde_transform(EXAMPLE))


@pytest.fixture(scope="module")
def lower_right(example_series):
    return CanonicalSolution(example_series, -QUARTER)


@pytest.fixture(scope="module")
def upper_right(example_series):
    return CanonicalSolution(example_series, QUARTER)


class TestFormalCoefficients:
    """Order-by-order block diagonalization."""

    def test_first_order_off_diagonal(self):
        """(T_1)_ij = -A_ij / (lambda_i - lambda_j) across blocks."""
        ft = formal_coeffs(A3, B3, 8)
        T1 = ft.coefficient(1)
        assert T1[0, 2] == pytest.approx(A3[0, 2])
        assert T1[1, 2] == pytest.approx(A3[1, 2])
        assert T1[2, 0] == pytest.approx(-A3[2, 0])
        assert T1[2, 1] == pytest.approx(-A3[2, 1])

    def test_leading_coefficient_is_identity(self):
        ft = formal_coeffs(A3, B3, 4)
        assert np.array_equal(ft.coefficient(0), np.eye(3))

    def test_residuals_vanish(self):
        ft = formal_coeffs(A3, B3, 30)
        assert ft.residuals().max() < 1e-9

    def test_tilde_residuals_vanish(self):
        ft = tilde_transform(CUBIC, K=40)
        assert ft.residuals().max() < 1e-9

    def test_gevrey_rate(self):
        """||T_k|| / k! grows like the inverse distance to the nearest singularity."""
        fit = gevrey_fit(tilde_transform(EXAMPLE))
        assert 0.8 <= fit.M <= 1.2

    def test_order_out_of_range(self):
        with pytest.raises(ConfigError):
            formal_coeffs(A3, B3, 201)

    def test_block_resonance(self):
        """Eigenvalues 0.5 and 1.5 inside one block differ by an integer."""
        A = np.array([[0.5, 0, 0.1], [0, 1.5, 0.2], [0.3, 0.4, 0]])
        with pytest.raises(ResonanceError):
            formal_coeffs(A, B3, 5)

    def test_order_zero_has_no_resonance_check(self):
        A = np.array([[0.5, 0, 0.1], [0, 1.5, 0.2], [0.3, 0.4, 0]])
        ft = formal_coeffs(A, B3, 0)
        assert ft.K == 0


class TestBorelSeries:
    def test_radius(self, example_series):
        assert example_series.radius(0) == pytest.approx(1.0)
        assert example_series.radius(1) == pytest.approx(1.0)

    def test_evaluate_beyond_radius(self, example_series):
        with pytest.raises(ConvergenceError):
            example_series.evaluate(0, 0.95)

    def test_evaluate_at_origin(self, example_series):
        U = example_series.evaluate(0, 0.0)
        assert np.allclose(U, np.eye(2)[:, :1])

    def test_vector_evaluation_shape(self, example_series):
        U = example_series.evaluate(1, np.array([0.1, 0.2j, -0.3]))
        assert U.shape == (3, 2, 1)

    def test_continued_ray_matches_series(self, example_series):
        """Past the seed radius the ODE values agree with the series inside its disc."""
        ray = continue_U(example_series, 0, QUARTER, 0.85)
        assert ray.seed_radius == pytest.approx(0.5)
        assert ray.steps > 0
        t = np.array([0.6, 0.7])
        expected = example_series.evaluate(0, t * np.exp(1j * QUARTER))
        assert np.max(np.abs(ray.values(t) - expected)) < 1e-6

    def test_short_ray_uses_series_only(self, example_series):
        ray = continue_U(example_series, 1, QUARTER, 0.3)
        assert ray.steps == 0
        expected = example_series.evaluate(1, 0.2 * np.exp(1j * QUARTER))
        assert np.allclose(ray.values(np.array([0.2])), expected)

    def test_ray_past_its_end(self, example_series):
        ray = continue_U(example_series, 0, QUARTER, 0.85)
        with pytest.raises(PathError):
            ray.values(np.array([1.2]))


class TestDirectionClass:
    def test_singular_directions(self):
        dc = DirectionClass.of([0, 1], QUARTER)
        assert dc.singular_args == (0.0, round(math.pi, 12))

    def test_too_close_to_singular_direction(self):
        with pytest.raises(PathError):
            DirectionClass.of([0, 1], 0.05)

    def test_contains(self):
        dc = DirectionClass.of([0, 1], QUARTER)
        assert dc.contains(0.5)
        assert dc.contains(3.0)
        assert not dc.contains(-0.5)


class TestLaplaceSum:
    """Sectorial solutions of the limit system."""

    @pytest.mark.parametrize("z", [0.3 * np.exp(0.6j), 0.5, 0.8 * np.exp(1.2j)])
    def test_determinant_is_one(self, upper_right, z):
        assert abs(det(upper_right.transform(z).T) - 1) < 1e-5

    @pytest.mark.parametrize("z", [0.3 * np.exp(0.6j), 0.5])
    def test_ode_residual(self, upper_right, z):
        assert upper_right.residual(z) < 1e-6

    def test_matches_truncated_series_near_zero(self, upper_right):
        """Error of the partial sum through T_3 is bounded by the omitted terms.

        The omitted terms shrink by about 5 |z| per order at |z| = 0.02, so
        twice the first of them bounds the truncation; the Laplace tail
        estimate and the integration tolerance are added on top.
        """
        z = 0.02 * np.exp(1j * QUARTER)
        ft = upper_right.series.transform
        partial = sum(ft.coefficient(k) * z**k for k in range(4))
        lap = upper_right.transform(z)
        bound = 2 * norm_inf(ft.coefficient(4)) * abs(z) ** 4 + lap.err_est + 1e-9
        assert np.max(np.abs(lap.T - partial)) <= bound

    def test_direction_class_stability(self, example_series, upper_right):
        """Moving alpha by 5 degrees inside its class leaves T unchanged."""
        z = 0.4 * np.exp(0.7j)
        shift = math.radians(5)
        for alpha in (QUARTER - shift, QUARTER + shift):
            other = CanonicalSolution(example_series, alpha)
            assert deviation(other.transform(z).T, upper_right.transform(z).T) < 1e-7

    def test_tail_estimate_is_small(self, upper_right):
        assert upper_right.transform(0.5).err_est < 1e-8

    def test_z_out_of_range(self, upper_right):
        with pytest.raises(ConfigError):
            upper_right.transform(0)
        with pytest.raises(ConfigError):
            upper_right.transform(2.5)

    def test_z_outside_half_plane(self, upper_right):
        with pytest.raises(PathError):
            upper_right.transform(-0.5)


class TestLaplaceStokes:
    """Stokes matrices of adjacent sectors against the closed form."""

    @pytest.mark.parametrize("p", [EXAMPLE, CUBIC], ids=["n2", "n3"])
    def test_matches_closed_form(self, p):
        S_U, S_L = stokes_limit(p)
        found = laplace_stokes_limit(p)
        assert deviation(found.S_U, S_U) < 1e-4
        assert deviation(found.S_L, S_L) < 1e-4
        assert found.spread < 1e-6

    def test_lower_matrix_is_unipotent(self, lower_right, upper_right):
        S = stokes_from_laplace(upper_right, lower_right, [0.5]).S
        assert np.allclose(np.diag(S), 1, atol=1e-8)
        assert abs(S[0, 1]) < 1e-8

    def test_samples_outside_overlap(self, lower_right, upper_right):
        with pytest.raises(PathError):
            stokes_from_laplace(upper_right, lower_right, [0.5j])


class TestConfluentTransform:
    """Finite-rho transforms against their limit and the formal expansion."""

    def test_extrapolated_limit(self, upper_right):
        """2 T(2 rho) - T(rho) at |rho| = 500 cancels the first-order term."""
        ft = upper_right.series.transform
        z = 0.3 * np.exp(0.5j)
        near = confluent_transform(ft, EXAMPLE, z, 500.0, "+", QUARTER)
        far = confluent_transform(ft, EXAMPLE, z, 1000.0, "+", QUARTER)
        assert deviation(2 * far - near, upper_right.transform(z).T) < 1e-3

    def test_deviation_is_first_order(self, upper_right):
        ft = upper_right.series.transform
        z = 0.3 * np.exp(0.5j)
        limit = upper_right.transform(z).T
        near, far = (
            deviation(confluent_transform(ft, EXAMPLE, z, r, "+", QUARTER), limit)
            for r in (500.0, 1000.0)
        )
        assert 1.7 < near / far < 2.3

    def test_matches_pochhammer_expansion(self, upper_right):
        """At small |z| the truncated sum of T_k w^k / (a + rho + 1)_k is exact."""
        ft = upper_right.series.transform
        z = 0.01 * np.exp(0.5j)
        T = confluent_transform(ft, EXAMPLE, z, 500.0, "+", QUARTER)
        assert deviation(T, _pochhammer_sum(ft, z, 500.0, 20)) < 1e-6

    def test_identity_up_to_first_order(self, upper_right):
        """With w = rho z held fixed, T+ - I shrinks like 1/rho."""
        ft = upper_right.series.transform
        w = 0.6 * np.exp(0.5j)

        def gap(rho: float) -> float:
            T = confluent_transform(ft, EXAMPLE, w / rho, rho, "+", QUARTER)
            return float(np.max(np.abs(T - np.eye(2))))

        near, far = gap(500.0), gap(1000.0)
        assert near < 10 / 500
        assert 1.7 < near / far < 2.3

    def test_reproduces_confluent_series_column(self, upper_right):
        """The first column of T+ Phi is the confluent series column at z = 0."""
        ft = upper_right.series.transform
        p = EXAMPLE.with_rho(500.0)
        z = 0.0012 * np.exp(0.5j)
        T = confluent_transform(ft, EXAMPLE, z, 500.0, "+", QUARTER)
        y = T[:, 0] * z ** (1 - p.beta_head[0])
        assert deviation(y, confluent_column(p, 0, z)) < 1e-6

    def test_wrong_sector(self, upper_right):
        ft = upper_right.series.transform
        with pytest.raises(SectorError):
            confluent_transform(ft, None, 0.3j, -500.0, "+", QUARTER)

    def test_bad_sign(self, upper_right):
        with pytest.raises(ConfigError):
            confluent_transform(
                upper_right.series.transform, None, 0.3, 500.0, "x", QUARTER
            )
