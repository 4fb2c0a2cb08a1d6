from typing import Any, Optional

import numpy as np

from ..cplx_core import CMat
from .base import LinearSystem


class ConfluentFamily(LinearSystem):
    """``z (z - B/rho) y' = (B + z A) y``.

    ``rho=None`` stands for the limit system ``z^2 y' = (B + z A) y``.
    """

    def __init__(self, A: Any, B: Any, rho: Optional[complex], debug: bool = False):
        super().__init__(A, B, debug=debug)
        self.rho = None if rho is None else complex(rho)
        self._lam = np.diag(self.B)

    @property
    def is_limit(self) -> bool:
        return self.rho is None

    @property
    def singular_points(self) -> tuple[complex, ...]:
        if self.rho is None:
            return (0j,)
        points = [0j]
        for lam in self.partition.eigenvalues:
            p = lam / self.rho
            if all(abs(p - q) > 0 for q in points):
                points.append(p)
        return tuple(points)

    def coefficient(self, z: complex) -> CMat:
        self._check_regular(z)
        z = complex(z)
        rhs = self.B + z * self.A
        if self.rho is None:
            return rhs / z**2
        return rhs / (z * (z - self._lam / self.rho))[:, None]

    def derivative(self, z: complex, Y: CMat) -> CMat:
        return self.coefficient(z) @ Y
