"""Tests for the Frobenius series engine."""

import math

import numpy as np
import pytest

from confluence_kit.exceptions import ConfigError, ConvergenceError, DimensionError
from confluence_kit.hg_model import (
    HGParams,
    apply_hg_operator,
    build_confluent,
    build_okubo,
)
from confluence_kit.regression import regression_case
from confluence_kit.series_solutions import (
    FrobeniusColumn,
    assemble_floquet,
    ck_coeffs,
    confluent_column,
    okubo_column_one,
    okubo_column_zero,
    pfq,
    pfq_coeffs,
    zero_column,
)


class TestPfq:
    """Generalized hypergeometric series."""

    def test_log_identity(self):
        """2F1(1, 1; 2; 1/2) = 2 ln 2."""
        value = pfq([1, 1], [2], 0.5)
        assert abs(value.value - 2 * math.log(2)) < 1e-10
        assert value.bound < 1e-12

    def test_exp_limit(self):
        """1F1(a; a; s) = exp(s)."""
        value = pfq([0.7], [0.7], 0.4 + 0.3j).value
        assert abs(value - np.exp(0.4 + 0.3j)) < 1e-13

    def test_at_origin(self):
        assert pfq([1.5], [2.5], 0).value == 1

    def test_radius(self):
        with pytest.raises(ConvergenceError):
            pfq([1, 1], [2], 0.95)

    def test_coefficients(self):
        c = pfq_coeffs([1, 1], [2], 4)
        assert np.allclose(c, [1, 1 / 2, 1 / 3, 1 / 4])


class TestCk:
    """Coefficients of the series at s = 1."""

    def test_hand_value(self):
        """beta_1 = 1, alpha = (1/3, 1/5): c_1 = (2/3)(4/5) = 8/15."""
        p = HGParams((1 / 3, 1 / 5), (1.0,))
        c = ck_coeffs(p, 3).c
        assert c[0] == 1
        assert abs(c[1] - 8 / 15) < 1e-15

    def test_n2_matches_euler_transformation(self):
        """At n = 2, c_k = (beta_1 - alpha_1)_k (beta_1 - alpha_2)_k / k!."""
        p = HGParams((0.31 + 0.1j, 0.47), (1.23,))
        c = ck_coeffs(p, 6).c
        a = p.beta_head[0] - p.alpha[0]
        b = p.beta_head[0] - p.alpha[1]
        expected = pfq_coeffs([a, b], [], 7) * 1.0
        assert np.allclose(c, expected, rtol=1e-13)

    def test_independent_of_rho(self):
        p = HGParams((0.21, 0.43, 0.67), (1.13, 1.41), 2.29)
        assert np.array_equal(ck_coeffs(p, 10).c, ck_coeffs(p.with_rho(7.5), 10).c)

    def test_order_cap(self):
        p = HGParams((0.3, 0.7), (1.2,))
        with pytest.raises(ConfigError):
            ck_coeffs(p, 61)


def test_shift_identity():
    """s**c times the series for (alpha + c, beta + c) solves the original operator."""
    rng = np.random.default_rng(7)
    c = complex(rng.uniform(0.1, 0.6), rng.uniform(-0.2, 0.2))
    alpha = [0.3 + 0.1j, 0.45, 0.62]
    beta = [1.25, 1.55 - 0.1j, 1 - c]
    coeffs = pfq_coeffs([a + c for a in alpha], [b + c for b in beta[:-1]], 80)
    out = apply_hg_operator(alpha, beta, c, coeffs)
    s = 0.3
    residual = abs(np.sum(out * s ** np.arange(out.size)))
    scale = abs(np.sum(coeffs * s ** np.arange(coeffs.size)))
    assert residual < 1e-8 * scale


def test_operator_needs_matching_lengths():
    with pytest.raises(DimensionError):
        apply_hg_operator([0.1, 0.2], [1.0], 0, [1.0])


class TestFloquetBasis:
    """Columns of V~+ from the series at 0 and 1."""

    @pytest.mark.parametrize("name", ["gauss_real", "cubic_complex"])
    def test_solves_okubo_system(self, name):
        """Five-point derivative of V~+ matches (s - B)^-1 (A + rho) V~+."""
        p = regression_case(name).params
        system = build_okubo(p)
        s, h = 0.5, 1e-3
        vals = [assemble_floquet(p, s + k * h) for k in (-2, -1, 1, 2)]
        d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
        rhs = system.derivative(s, assemble_floquet(p, s))
        assert np.max(np.abs(d - rhs)) < 1e-7 * np.max(np.abs(rhs))

    @pytest.mark.parametrize("name", ["gauss_real", "quartic"])
    def test_column_at_one_solves_okubo_system(self, name):
        p = regression_case(name).params
        system = build_okubo(p)
        s, h = 0.6, 1e-3
        vals = [okubo_column_one(p, s + k * h) for k in (-2, -1, 1, 2)]
        d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
        rhs = system.derivative(s, okubo_column_one(p, s)[:, None])[:, 0]
        assert np.max(np.abs(d - rhs)) < 1e-7 * np.max(np.abs(rhs))

    @pytest.mark.parametrize("K", [32, 48])
    def test_truncation_bound_covers_error(self, K):
        """The tail bound of K terms dominates the change when K doubles."""
        p = regression_case("cubic_complex").params
        s = 0.8 * np.exp(0.3j)
        col = zero_column(p, 0, 0.8)
        assert col.coeffs.shape[1] >= 2 * K

        def cut(m: int) -> FrobeniusColumn:
            coeffs = col.coeffs[:, :m]
            return FrobeniusColumn(col.exponent, col.center, coeffs, col.branch)

        short, long = cut(K).evaluate(s), cut(2 * K).evaluate(s)
        assert short.terms == K
        error = np.max(np.abs(short.value - long.value))
        assert math.isfinite(short.trunc_error)
        assert 0 < error <= short.trunc_error

    def test_columns_match_assembly(self):
        p = regression_case("gauss_real").params
        V = assemble_floquet(p, 0.4)
        assert np.allclose(V[:, 0], okubo_column_zero(p, 0, 0.4))
        assert np.allclose(V[:, 1], okubo_column_one(p, 0.4))

    def test_column_index_checked(self):
        p = regression_case("gauss_real").params
        with pytest.raises(DimensionError):
            zero_column(p, 1, 0.5)

    def test_beyond_radius(self):
        p = regression_case("gauss_real").params
        with pytest.raises(ConvergenceError):
            zero_column(p, 0, 0.95)

    def test_leading_behavior_at_origin(self):
        """First component behaves like s**(1 - beta_1 + rho) near 0."""
        p = regression_case("gauss_real").params
        s = 1e-3
        v = okubo_column_zero(p, 0, s)
        exponent = 1 - p.beta_head[0] + p.rho
        assert abs(v[0] / s**exponent - 1) < 1e-2


class TestConfluentColumn:
    """Columns of Y~+ near z = 0 for the confluent family."""

    def test_solves_confluent_system(self):
        p = regression_case("gauss_real").params
        system = build_confluent(p)
        z, h = 0.2, 1e-3
        vals = [confluent_column(p, 0, z + k * h) for k in (-2, -1, 1, 2)]
        d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
        rhs = system.coefficient(z) @ confluent_column(p, 0, z)
        assert np.max(np.abs(d - rhs)) < 1e-7 * np.max(np.abs(rhs))

    def test_rescaled_okubo_column(self):
        """V~+ at rho z equals rho**(1 - beta) (rho z)**rho Y~+ at z."""
        p = regression_case("gauss_real").params
        rho, z = p.rho.real, 0.2
        scale = rho ** (1 - p.beta_head[0]) * (rho * z) ** rho
        expected = okubo_column_zero(p, 0, rho * z)
        assert np.allclose(scale * confluent_column(p, 0, z), expected, rtol=1e-10)

    def test_origin_rejected(self):
        p = regression_case("gauss_real").params
        with pytest.raises(DimensionError):
            confluent_column(p, 0, 0)
