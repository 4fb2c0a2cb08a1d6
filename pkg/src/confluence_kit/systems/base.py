from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..constants import RESONANCE_TOL
from ..cplx_core import CMat, as_matrix
from ..debug import print_debug
from ..exceptions import DimensionError, PathError


@dataclass(frozen=True)
class BlockPartition:
    """Grouping of the indices of a diagonal matrix by equal eigenvalue."""

    eigenvalues: tuple[complex, ...]
    indices: tuple[tuple[int, ...], ...]

    @classmethod
    def from_diagonal(cls, B: Any, tol: float = RESONANCE_TOL) -> "BlockPartition":
        diag = np.diag(as_matrix(B, "B"))
        eigenvalues: list[complex] = []
        groups: list[list[int]] = []
        for i, b in enumerate(diag):
            for k, lam in enumerate(eigenvalues):
                if abs(b - lam) <= tol:
                    groups[k].append(i)
                    break
            else:
                eigenvalues.append(complex(b))
                groups.append([i])
        return cls(tuple(eigenvalues), tuple(tuple(g) for g in groups))

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def block(self, M: CMat, i: int, j: int) -> CMat:
        return M[np.ix_(self.indices[i], self.indices[j])]

    def diagonal_part(self, M: CMat) -> CMat:
        """Block-diagonal part of ``M`` (the ``A_D`` of a formal system)."""
        out = np.zeros_like(M, dtype=np.complex128)
        for idx in self.indices:
            out[np.ix_(idx, idx)] = M[np.ix_(idx, idx)]
        return out

    def min_gap(self) -> float:
        lams = self.eigenvalues
        gaps = [abs(a - b) for k, a in enumerate(lams) for b in lams[k + 1 :]]
        return min(gaps) if gaps else float("inf")


class LinearSystem(ABC):
    """Abstract base class for linear systems ``Y' = M(x) Y``."""

    def __init__(self, A: Any, B: Any, debug: bool = False):
        self.A = as_matrix(A, "A")
        self.B = as_matrix(B, "B")
        if self.A.shape != self.B.shape or self.A.shape[0] != self.A.shape[1]:
            raise DimensionError(
                f"A and B must be square of equal size, got {self.A.shape} "
                f"and {self.B.shape}"
            )
        if np.count_nonzero(self.B - np.diag(np.diag(self.B))):
            raise DimensionError("B must be diagonal")
        self._debug = debug
        self.partition = BlockPartition.from_diagonal(self.B)

    @property
    def n(self) -> int:
        return int(self.A.shape[0])

    @property
    @abstractmethod
    def singular_points(self) -> tuple[complex, ...]:
        """Finite singular points of the system."""

    @abstractmethod
    def derivative(self, x: complex, Y: CMat) -> CMat:
        """Right-hand side ``Y'(x)`` for the solution values ``Y``."""
        raise NotImplementedError("Subclasses must implement derivative()")

    def _check_regular(self, x: complex, tol: float = 1e-14) -> None:
        for p in self.singular_points:
            if abs(complex(x) - p) <= tol:
                raise PathError(
                    f"{type(self).__name__} evaluated at its singular point {p}",
                    location=complex(x),
                )

    def _print_debug(self, message: str) -> None:
        print_debug(self._debug, message)
