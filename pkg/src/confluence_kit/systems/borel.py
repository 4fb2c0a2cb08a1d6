from typing import Any

import numpy as np

from ..cplx_core import CMat
from .base import LinearSystem


class BorelColumnSystem(LinearSystem):
    """Fuchsian system of the Borel transform of one block column.

    ``(s - B + lambda_j) U' = A U - U A_jj``, with ``U`` of shape
    ``n x n_j``. Rows of block ``j`` carry a factor ``1/s``; the solution
    is analytic at ``s = 0`` and is seeded off it from its Taylor series.
    """

    def __init__(self, A: Any, B: Any, column: int, debug: bool = False):
        super().__init__(A, B, debug=debug)
        self.column = column
        self.lam = self.partition.eigenvalues[column]
        idx = self.partition.indices[column]
        self.A_jj = self.A[np.ix_(idx, idx)]
        self._shift = np.diag(self.B) - self.lam

    @property
    def width(self) -> int:
        return int(self.A_jj.shape[0])

    @property
    def singular_points(self) -> tuple[complex, ...]:
        return tuple(
            lam - self.lam
            for k, lam in enumerate(self.partition.eigenvalues)
            if k != self.column
        )

    def derivative(self, s: complex, U: CMat) -> CMat:
        self._check_regular(s)
        rhs = self.A @ U - U @ self.A_jj
        return rhs / (complex(s) - self._shift)[:, None]
