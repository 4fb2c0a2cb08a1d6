"""Tests for the complex Gamma helpers, against mpmath."""

import math

import mpmath
import numpy as np
import pytest

from confluence_kit.exceptions import ConfluenceError, PoleError
from confluence_kit.special_fn import (
    gamma,
    gamma_ratio,
    log_gamma,
    log_gamma_quotient,
    pochhammer,
    pole_distance,
)

POINTS = [0.5, 1.5 + 2j, -2.5 + 0.3j, 7.25 - 4j, 0.1 - 0.01j, -0.7]


@pytest.mark.parametrize("z", POINTS)
def test_gamma_matches_mpmath(z):
    """Gamma agrees with mpmath to 1e-13 relative."""
    expected = complex(mpmath.gamma(mpmath.mpc(z)))
    value = gamma(z).value
    assert abs(value - expected) <= 1e-13 * abs(expected)


@pytest.mark.parametrize("z", [2.0 + 1j, 30 + 5j, 0.3 - 2j])
def test_log_gamma_is_principal_loggamma(z):
    expected = complex(mpmath.loggamma(mpmath.mpc(z)))
    assert abs(log_gamma(z) - expected) < 1e-12


def test_half_is_sqrt_pi():
    expected = math.sqrt(math.pi)
    assert abs(gamma(0.5).value - expected) <= 8 * np.finfo(float).eps * expected


class TestPoles:
    """Pole guard on 0, -1, -2, ..."""

    def test_pole_distance(self):
        assert pole_distance(-3 + 1e-3j) == pytest.approx(1e-3)
        assert pole_distance(2.5) == pytest.approx(2.5)

    def test_near_pole_raises_with_label(self):
        with pytest.raises(PoleError) as info:
            gamma(-2 + 1e-10, label="1+gamma+rho")
        assert info.value.label == "1+gamma+rho"
        assert info.value.distance < 1e-8

    def test_just_outside_guard(self):
        """1e-6 from a pole is still evaluated."""
        assert np.isfinite(gamma(-1 + 1e-6).value)

    def test_quotient_names_denominator(self):
        with pytest.raises(PoleError) as info:
            log_gamma_quotient([("a", 1.5)], [("b", 0.0)])
        assert info.value.label == "b"


class TestPochhammer:
    def test_values(self):
        assert pochhammer(3, 0) == 1
        assert pochhammer(1, 5) == 120
        assert abs(pochhammer(0.5 + 1j, 3) - complex(mpmath.rf(0.5 + 1j, 3))) < 1e-13

    def test_negative_order(self):
        with pytest.raises(ConfluenceError):
            pochhammer(1.0, -1)


class TestGammaRatio:
    """rho**(a-b) Gamma(b+rho) / Gamma(a+rho)."""

    def test_small_rho_matches_direct(self):
        a, b, rho = 0.3, 1.7 + 0.2j, 2.5
        direct = rho ** (a - b) * complex(mpmath.gamma(b + rho) / mpmath.gamma(a + rho))
        assert abs(gamma_ratio(a, b, rho) - direct) < 1e-12 * abs(direct)

    def test_large_rho_does_not_overflow(self):
        """|rho| = 1e6 gives a ratio close to 1 instead of inf/inf."""
        value = gamma_ratio(0.3 + 0.1j, 1.2, 1e6 * np.exp(0.4j))
        assert abs(value - 1) < 1e-5

    def test_tends_to_one_at_first_order(self):
        """The deviation from 1 is about (b-a)(a+b-1) / (2 rho)."""
        a, b, rho = 0.2, 1.1, 1e4
        value = gamma_ratio(a, b, rho)
        assert abs((value - 1) * rho - (b - a) * (a + b - 1) / 2) < 1e-3
