from .base import Branch
from .windows import PRINCIPAL, UPPER_CUT, CutBranch, PrincipalBranch

__all__ = ["Branch", "PrincipalBranch", "CutBranch", "PRINCIPAL", "UPPER_CUT"]
