import math

from .base import Branch


class PrincipalBranch(Branch):
    """Principal branch, argument in (-pi, pi]."""

    @property
    def lower(self) -> float:
        return -math.pi

    @property
    def name(self) -> str:
        return "principal"


class CutBranch(Branch):
    """Branch with the cut placed along the ray ``arg = lower``."""

    def __init__(self, lower: float, name: str = ""):
        self._lower = float(lower)
        self._name = name or f"cut({self._lower:.6g})"

    @property
    def lower(self) -> float:
        return self._lower

    @property
    def name(self) -> str:
        return self._name

    @classmethod
    def centered(cls, direction: float) -> "CutBranch":
        """Window (direction - pi, direction + pi], used for sectorial solutions."""
        return cls(direction - math.pi, name=f"centered({direction:.6g})")


PRINCIPAL = PrincipalBranch()

# Window (0, 2*pi]: used for (s - 1)**c near the base point and for the
# (e^{-i pi} rho) powers of the minus sector.
UPPER_CUT = CutBranch(0.0, name="upper")
