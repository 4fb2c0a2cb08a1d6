"""Tests for the dense complex matrix helpers."""

import numpy as np
import pytest

from confluence_kit.branches import UPPER_CUT
from confluence_kit.cplx_core import (
    as_matrix,
    det,
    deviation,
    diag_power,
    eig,
    inv,
    inv_diagonal,
    lu_solve,
    matmul,
    norm_inf,
)
from confluence_kit.exceptions import (
    ConfluenceError,
    DimensionError,
    SingularMatrixError,
)


class TestLinearAlgebra:
    """LU-based solve, inverse and determinant."""

    def test_solve_complex_system(self):
        """A complex 3x3 system is solved to rounding."""
        a = np.array([[2, 1j, 0], [1, 3, -1j], [0.5j, 0, 4]], dtype=complex)
        x = np.array([1 + 1j, -2, 0.5j])
        assert np.allclose(lu_solve(a, a @ x), x, atol=1e-13)

    def test_solve_matrix_rhs_keeps_shape(self):
        a = np.diag([1.0, 2.0])
        out = lu_solve(a, np.ones((2, 3)))
        assert out.shape == (2, 3)
        assert np.allclose(out[1], 0.5)

    def test_singular_matrix_reports_pivot(self):
        """A rank-deficient matrix raises with the smallest pivot attached."""
        a = [[1, 2], [2, 4]]
        with pytest.raises(SingularMatrixError) as info:
            lu_solve(a, [1, 1])
        assert info.value.smallest_pivot < 1e-12

    def test_inverse(self):
        a = np.array([[1, 2j], [-1j, 3]])
        assert np.allclose(inv(a) @ a, np.eye(2), atol=1e-14)

    def test_inverse_of_wide_diagonal(self):
        """Entries 1 and e^60 defeat the relative pivot guard but not inv_diagonal."""
        a = np.diag([1.0, np.exp(60.0)]).astype(complex)
        with pytest.raises(SingularMatrixError):
            inv(a)
        assert np.allclose(inv_diagonal(a), np.diag([1.0, np.exp(-60.0)]))

    def test_inverse_of_diagonal_with_zero(self):
        with pytest.raises(SingularMatrixError):
            inv_diagonal(np.diag([1.0, 0.0]))

    def test_determinant_with_row_swap(self):
        """The pivot sign is accounted for."""
        assert abs(det([[0, 1], [1, 0]]) - (-1)) < 1e-15
        assert abs(det([[2, 1j], [1, 1]]) - (2 - 1j)) < 1e-14

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))
        with pytest.raises(DimensionError):
            lu_solve(np.ones((2, 3)), [1, 1])
        with pytest.raises(DimensionError):
            as_matrix([1, 2, 3])

    def test_non_finite_rejected(self):
        with pytest.raises(ConfluenceError):
            as_matrix([[1, np.nan], [0, 1]])

    def test_norm_inf_is_max_row_sum(self):
        assert norm_inf([[1, -2], [3j, 0.5]]) == 3.5


class TestEigenvalues:
    """Eigenvalues through the Hessenberg/QR solver."""

    def test_companion_example(self):
        """[[-0.2, 1], [-0.05, -0.8]] has eigenvalues -0.3 and -0.7."""
        values = np.sort_complex(eig([[-0.2, 1], [-0.05, -0.8]]))
        assert np.allclose(values, [-0.7, -0.3], atol=1e-12)

    def test_order_cap(self):
        with pytest.raises(DimensionError):
            eig(np.eye(17))


class TestHelpers:
    def test_diag_power_branch(self):
        """(-1)**diag(1/2) is i on the principal and on the upper branch."""
        assert np.isclose(diag_power([0.5], -1.0)[0, 0], 1j)
        upper = diag_power([0.5], -1j, UPPER_CUT)[0, 0]
        assert np.isclose(upper, np.exp(0.75j * np.pi))

    def test_diag_power_zero_base(self):
        with pytest.raises(ConfluenceError):
            diag_power([1.0], 0)

    def test_deviation_relative_and_absolute(self):
        """Relative above the floor, absolute below it."""
        assert np.isclose(deviation([101.0], [100.0]), 0.01)
        assert np.isclose(deviation([1e-9], [0.0]), 1e-9)

    def test_deviation_shape_mismatch(self):
        with pytest.raises(DimensionError):
            deviation(np.ones(2), np.ones(3))
