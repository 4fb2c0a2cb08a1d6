"""Dense complex matrix helpers.

Thin checked wrappers over numpy/scipy.linalg. Every function accepts
anything ``np.asarray`` understands and returns ``complex128`` arrays.
"""

import warnings
from collections.abc import Sequence
from typing import Any

import numpy as np
from scipy import linalg

from .branches import PRINCIPAL, Branch
from .constants import ABSOLUTE_FLOOR, MAX_EIG_DIM, PIVOT_RTOL
from .exceptions import (
    ConfluenceError,
    ConvergenceError,
    DimensionError,
    SingularMatrixError,
)

CMat = np.ndarray


def as_matrix(a: Any, name: str = "matrix") -> CMat:
    """Convert to a 2-D complex array, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfluenceError(f"{name} contains non-finite entries")
    return m


def _square(a: Any, name: str) -> CMat:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def identity(n: int) -> CMat:
    return np.eye(n, dtype=np.complex128)


def norm_inf(a: Any) -> float:
    """Maximum absolute row sum."""
    m = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    return float(np.max(np.sum(np.abs(m), axis=1))) if m.size else 0.0


def matmul(a: Any, b: Any) -> CMat:
    x = as_matrix(a, "left factor")
    y = as_matrix(b, "right factor")
    if x.shape[1] != y.shape[0]:
        raise DimensionError(f"Cannot multiply {x.shape} by {y.shape}")
    return x @ y


def _factor(a: CMat) -> tuple[CMat, np.ndarray, float]:
    with warnings.catch_warnings():
        # exactly singular input is reported through the pivot check below
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    smallest = float(np.min(pivots)) if pivots.size else 0.0
    return lu, piv, smallest


def lu_solve(a: Any, rhs: Any) -> CMat:
    """Solve ``a @ x = rhs`` with partial pivoting.

    Args:
        a: Square coefficient matrix
        rhs: Right-hand side, vector or matrix with ``a.shape[0]`` rows

    Returns:
        Solution with the same shape as ``rhs``

    Raises:
        DimensionError: If shapes do not fit
        SingularMatrixError: If a pivot falls below ``1e-13 * ||a||_inf``
    """
    m = _square(a, "coefficient matrix")
    b = np.asarray(rhs, dtype=np.complex128)
    if b.shape[0] != m.shape[0]:
        raise DimensionError(
            f"Right-hand side has {b.shape[0]} rows, matrix has {m.shape[0]}"
        )
    lu, piv, smallest = _factor(m)
    threshold = PIVOT_RTOL * norm_inf(m)
    if smallest <= threshold:
        raise SingularMatrixError(
            f"Matrix is singular to working precision "
            f"(smallest pivot {smallest:.3e}, threshold {threshold:.3e})",
            smallest_pivot=smallest,
        )
    return np.asarray(linalg.lu_solve((lu, piv), b, check_finite=False))


def inv(a: Any) -> CMat:
    m = _square(a, "matrix")
    return lu_solve(m, identity(m.shape[0]))


def det(a: Any) -> complex:
    """Determinant as the signed product of the LU pivots."""
    m = _square(a, "matrix")
    lu, piv, _ = _factor(m)
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def eig(a: Any) -> np.ndarray:
    """All eigenvalues, with multiplicity.

    LAPACK reduces to Hessenberg form and runs shifted QR on it.
    """
    m = _square(a, "matrix")
    if m.shape[0] > MAX_EIG_DIM:
        raise DimensionError(
            f"Eigenvalues are supported up to order {MAX_EIG_DIM}, got {m.shape[0]}"
        )
    try:
        return np.asarray(linalg.eigvals(m, check_finite=False), dtype=np.complex128)
    except linalg.LinAlgError as e:
        raise ConvergenceError(f"QR iteration did not converge: {e}") from e


def diag_power(
    d: Sequence[complex], base: complex, branch: Branch = PRINCIPAL
) -> CMat:
    """Return ``base ** diag(d)`` with the logarithm taken on ``branch``."""
    if complex(base) == 0:
        raise ConfluenceError("diag_power needs a non-zero base")
    exponents = np.asarray(d, dtype=np.complex128)
    return np.diag(np.exp(exponents * branch.log(base)))


def inv_diagonal(a: Any) -> CMat:
    """Inverse of a diagonal matrix, entry by entry.

    Unlike :func:`inv` there is no relative pivot guard, so diagonals that
    span many orders of magnitude (formal monodromies at large ``Im rho``)
    stay invertible.

    Raises:
        SingularMatrixError: If a diagonal entry is zero
    """
    m = _square(a, "diagonal matrix")
    d = np.diag(m)
    if np.any(d == 0):
        raise SingularMatrixError("Diagonal matrix has a zero entry", 0.0)
    return np.diag(1.0 / d)


def deviation(x: Any, y: Any, floor: float = ABSOLUTE_FLOOR) -> float:
    """Largest entrywise deviation of ``x`` from the reference ``y``.

    Relative where ``|y|`` is at least ``floor``, absolute below it.
    """
    a = np.asarray(x, dtype=np.complex128)
    b = np.asarray(y, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"Cannot compare shapes {a.shape} and {b.shape}")
    if a.size == 0:
        return 0.0
    scale = np.abs(b)
    diff = np.abs(a - b)
    rel = np.where(scale >= floor, diff / np.where(scale >= floor, scale, 1.0), diff)
    return float(np.max(rel))


def block_diag(*blocks: Any) -> CMat:
    return np.asarray(linalg.block_diag(*blocks), dtype=np.complex128)
