"""Tests for the Kit factory and its shared tolerances."""

import math

import numpy as np
import pytest

from confluence_kit import Kit, Tolerances
from confluence_kit.branches import PRINCIPAL, UPPER_CUT
from confluence_kit.constants import BASE_POINT
from confluence_kit.exceptions import (
    ConfigError,
    DimensionError,
    PathError,
    ResonanceError,
)
from confluence_kit.series_solutions import assemble_floquet
from confluence_kit.systems import ConfluentFamily, OkuboSystem


@pytest.fixture(autouse=True)
def clean_kit():
    Kit.reset()
    yield
    Kit.reset()


def test_default_tolerances():
    tol = Kit.get_tolerances()
    assert tol == Tolerances(1e-10, 1e-16, 1e-12)


def test_set_tolerances_keeps_the_rest():
    Kit.set_tolerances(rk_tol=1e-8)
    tol = Kit.get_tolerances()
    assert tol.rk_tol == 1e-8
    assert tol.series_tol == 1e-16
    assert tol.quad_tol == 1e-12


@pytest.mark.parametrize(
    "overrides",
    [{"rk_tol": 1e-2}, {"rk_tol": 1e-15}, {"quad_tol": 0}, {"series_tol": 1e-19}],
)
def test_tolerance_out_of_range(overrides):
    with pytest.raises(ConfigError):
        Kit.set_tolerances(**overrides)
    assert Kit.get_tolerances() == Tolerances()


def test_series_tolerance_below_machine_epsilon():
    Kit.set_tolerances(series_tol=1e-18)
    assert Kit.get_tolerances().series_tol == 1e-18


def test_tolerance_type():
    with pytest.raises(ConfigError):
        Tolerances(rk_tol=True)
    with pytest.raises(ConfigError):
        Tolerances(quad_tol="1e-8")


def test_unknown_tolerance():
    with pytest.raises(ConfigError):
        Kit.set_tolerances(step=0.1)


def test_branch():
    Kit.set_branch(UPPER_CUT)
    assert Kit.get_branch() is UPPER_CUT
    with pytest.raises(ConfigError):
        Kit.set_branch("upper")


def test_reset():
    Kit.set_debug(True)
    Kit.set_tolerances(rk_tol=1e-6)
    Kit.set_branch(UPPER_CUT)
    Kit.reset()
    assert Kit._debug is False
    assert Kit.get_tolerances() == Tolerances()
    assert Kit.get_branch() is PRINCIPAL


class TestFactories:
    def test_params(self):
        p = Kit.params([0.3, 0.7], [1.2], 2.5)
        assert p.n == 2
        assert p.gamma == pytest.approx(-0.8)

    def test_params_validation(self):
        with pytest.raises(ResonanceError):
            Kit.params([0.2, 0.4, 0.6], [1.2, 2.2], 3.7)
        p = Kit.params([0.2, 0.4, 0.6], [1.2, 2.2], 3.7, validate=False)
        assert p.n == 3

    def test_params_dimension(self):
        with pytest.raises(DimensionError):
            Kit.params([0.3, 0.7], [1.2, 1.4])

    def test_systems(self):
        p = Kit.params([0.3, 0.7], [1.2], 2.5)
        assert isinstance(Kit.okubo(p), OkuboSystem)
        assert isinstance(Kit.confluent(p), ConfluentFamily)
        assert isinstance(Kit.limit(p), ConfluentFamily)

    def test_floquet_follows_branch(self):
        """A cut through s scales column j by exp(2 pi i (1 - beta_j + rho))."""
        p = Kit.params([0.3, 0.7], [1.2], 2.5)
        s = 0.5 - 0.3j
        V = Kit.floquet(p, s)
        Kit.set_branch(UPPER_CUT)
        W = Kit.floquet(p, s)
        turn = np.exp(2j * math.pi * (1 - 1.2 + 2.5))
        assert np.allclose(W[:, 0], V[:, 0] * turn, rtol=1e-12)
        assert np.allclose(W[:, 1], V[:, 1], rtol=1e-12)

    def test_floquet_defaults_to_base_point(self):
        p = Kit.params([0.3, 0.7], [1.2], 2.5)
        assert np.array_equal(Kit.floquet(p), assemble_floquet(p, BASE_POINT))

    def test_canonical(self):
        p = Kit.params([0.3, 0.7], [1.2])
        cs = Kit.canonical(p, math.pi / 4)
        assert cs.alpha == pytest.approx(math.pi / 4)
        assert cs.tol == 1e-10

    def test_canonical_on_singular_direction(self):
        p = Kit.params([0.3, 0.7], [1.2])
        with pytest.raises(PathError):
            Kit.canonical(p, 0.0)
