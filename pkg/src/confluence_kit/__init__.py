"""confluence_kit - Monodromy and Stokes data of the confluent hypergeometric family."""

from .branches import PRINCIPAL, UPPER_CUT, Branch, CutBranch
from .builder import Kit, Tolerances
from .exceptions import (
    ConfigError,
    ConfluenceError,
    ConvergenceError,
    DimensionError,
    PathError,
    PoleError,
    ResonanceError,
    SectorError,
    SingularMatrixError,
)
from .hg_model import HGParams, ParameterSector

__all__ = [
    "Kit",
    "Tolerances",
    "HGParams",
    "ParameterSector",
    "Branch",
    "CutBranch",
    "PRINCIPAL",
    "UPPER_CUT",
    "ConfluenceError",
    "ConfigError",
    "ConvergenceError",
    "DimensionError",
    "PathError",
    "PoleError",
    "ResonanceError",
    "SectorError",
    "SingularMatrixError",
]

__version__ = "0.1.0"
