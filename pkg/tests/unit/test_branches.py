"""Tests for logarithm branches."""

import math

import pytest

from confluence_kit.branches import PRINCIPAL, UPPER_CUT, CutBranch
from confluence_kit.exceptions import ConfluenceError


class TestPrincipal:
    def test_window(self):
        assert PRINCIPAL.lower == -math.pi
        assert PRINCIPAL.upper == math.pi

    def test_negative_axis_is_plus_pi(self):
        """The window is half-open: arg(-1) = pi, never -pi."""
        assert PRINCIPAL.arg(-1.0) == pytest.approx(math.pi)

    def test_log_zero(self):
        with pytest.raises(ConfluenceError):
            PRINCIPAL.log(0)


class TestCutBranch:
    """Windows (lower, lower + 2*pi]."""

    def test_upper_cut_puts_minus_half_at_pi(self):
        """(s - 1) at s = 1/2 has argument pi, interior to (0, 2*pi]."""
        assert UPPER_CUT.arg(0.5 - 1) == pytest.approx(math.pi)
        assert UPPER_CUT.arg(-1j) == pytest.approx(1.5 * math.pi)

    def test_positive_axis_on_upper_cut(self):
        assert UPPER_CUT.arg(2.0) == pytest.approx(2 * math.pi)

    def test_power_differs_across_branches(self):
        """z**c on two branches differs by exp(2 pi i c) when the windows split z."""
        z, c = -1j, 0.3
        ratio = UPPER_CUT.power(z, c) / PRINCIPAL.power(z, c)
        turn = complex(math.cos(0.6 * math.pi), math.sin(0.6 * math.pi))
        assert ratio == pytest.approx(turn)

    def test_moved_cut_agrees_on_positive_axis(self):
        """Moving the cut to -pi/2 leaves s**c unchanged at s = 1/2."""
        moved = CutBranch(-math.pi / 2)
        c = 0.7 + 0.2j
        assert moved.power(0.5, c) == pytest.approx(PRINCIPAL.power(0.5, c))

    def test_centered(self):
        b = CutBranch.centered(math.pi / 4)
        assert b.contains(math.pi / 4 + 3.0)
        assert not b.contains(math.pi / 4 - 3.2)
        assert b.arg(-1 - 0.01j) == pytest.approx(math.pi + math.atan(0.01))

    def test_names(self):
        assert PRINCIPAL.name == "principal"
        assert UPPER_CUT.name == "upper"
        assert CutBranch(0.5).name == "cut(0.5)"
