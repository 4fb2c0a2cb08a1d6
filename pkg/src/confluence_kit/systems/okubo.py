from typing import Any

import numpy as np

from ..cplx_core import CMat
from .base import LinearSystem


class OkuboSystem(LinearSystem):
    """``(s - B) v' = (A + rho) v``."""

    def __init__(self, A: Any, B: Any, rho: complex, debug: bool = False):
        super().__init__(A, B, debug=debug)
        self.rho = complex(rho)
        self._shifted = self.A + self.rho * np.eye(self.n)
        self._lam = np.diag(self.B)

    @property
    def singular_points(self) -> tuple[complex, ...]:
        return self.partition.eigenvalues

    def coefficient(self, s: complex) -> CMat:
        self._check_regular(s)
        return self._shifted / (complex(s) - self._lam)[:, None]

    def derivative(self, s: complex, Y: CMat) -> CMat:
        return self.coefficient(s) @ Y

    def trace(self, s: complex) -> complex:
        """``tr M(s)``, the logarithmic derivative of the Wronskian."""
        return complex(np.sum(np.diag(self.coefficient(s))))
