from collections.abc import Sequence
from dataclasses import dataclass, fields, replace
from typing import Any, Optional

import numpy as np

from .borel_laplace import BorelSeries, CanonicalSolution, tilde_transform
from .branches import PRINCIPAL, Branch
from .constants import (
    BASE_POINT,
    DEFAULT_QUAD_TOL,
    DEFAULT_RK_TOL,
    DEFAULT_SERIES_TOL,
    SERIES_TOL_MIN,
    TOL_MAX,
    TOL_MIN,
)
from .exceptions import ConfigError
from .hg_model import HGParams, build_confluent, build_okubo, ensure_valid
from .series_solutions import assemble_floquet
from .systems import ConfluentFamily, OkuboSystem


@dataclass(frozen=True)
class Tolerances:
    """Tolerances shared by every computation started from :class:`Kit`."""

    rk_tol: float = DEFAULT_RK_TOL
    series_tol: float = DEFAULT_SERIES_TOL
    quad_tol: float = DEFAULT_QUAD_TOL

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"Tolerance {f.name} must be a number, got {value!r}")
            low = SERIES_TOL_MIN if f.name == "series_tol" else TOL_MIN
            if not low <= value <= TOL_MAX:
                raise ConfigError(
                    f"Tolerance {f.name} must lie in [{low}, {TOL_MAX}], got {value}"
                )
            object.__setattr__(self, f.name, float(value))

    def with_overrides(self, **overrides: Any) -> "Tolerances":
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"Unknown tolerance keys: {sorted(unknown)}")
        return replace(self, **overrides)


class Kit:
    """System factory."""

    _debug = False
    _tolerances = Tolerances()
    _branch: Branch = PRINCIPAL

    @classmethod
    def set_debug(cls, debug: bool = True):
        """Enable or disable debug mode (prints diagnostics to stderr)."""
        cls._debug = debug

    @classmethod
    def set_tolerances(cls, **overrides: Any):
        """Override some of the default tolerances; the rest are kept.

        Raises:
            ConfigError: On unknown keys or values outside the accepted range
        """
        cls._tolerances = cls._tolerances.with_overrides(**overrides)

    @classmethod
    def get_tolerances(cls) -> Tolerances:
        return cls._tolerances

    @classmethod
    def reset(cls):
        """Restore debug off, default tolerances and the principal branch."""
        cls._debug = False
        cls._tolerances = Tolerances()
        cls._branch = PRINCIPAL

    @classmethod
    def set_branch(cls, branch: Branch):
        """Set the branch used for ``s**(1 - beta_j + rho)`` at the origin."""
        if not isinstance(branch, Branch):
            raise ConfigError(f"Expected a Branch, got {type(branch).__name__}")
        cls._branch = branch

    @classmethod
    def get_branch(cls) -> Branch:
        return cls._branch

    @staticmethod
    def params(
        alpha: Sequence[complex],
        beta: Sequence[complex],
        rho: Optional[complex] = None,
        validate: bool = True,
    ) -> HGParams:
        """Parameters ``(alpha, beta_1..beta_{n-1}, rho)``; ``rho=None`` is the limit.

        Raises:
            DimensionError: If the lengths do not fit
            ResonanceError: If ``validate`` and a non-resonance condition fails
        """
        p = HGParams(tuple(alpha), tuple(beta), rho)
        if validate:
            ensure_valid(p)
        return p

    @staticmethod
    def okubo(p: HGParams) -> OkuboSystem:
        return build_okubo(p, debug=Kit._debug)

    @staticmethod
    def confluent(p: HGParams, rho: Optional[complex] = None) -> ConfluentFamily:
        """Confluent family at ``rho`` (defaults to ``p.rho``)."""
        return build_confluent(p, p.rho if rho is None else rho, debug=Kit._debug)

    @staticmethod
    def limit(p: HGParams) -> ConfluentFamily:
        return build_confluent(p, None, debug=Kit._debug)

    @staticmethod
    def floquet(p: HGParams, s: complex = BASE_POINT) -> np.ndarray:
        return assemble_floquet(p, s, Kit._tolerances.series_tol, Kit._branch)

    @staticmethod
    def canonical(p: HGParams, direction: float) -> CanonicalSolution:
        """Sectorial solution of the limit system in the tilde frame.

        Args:
            p: Parameters; ``rho`` is ignored
            direction: Laplace direction ``alpha`` in radians, kept clear of
                the singular directions of the Borel plane

        Raises:
            PathError: If ``direction`` is too close to a singular direction
        """
        tol = Kit._tolerances
        return CanonicalSolution(
            BorelSeries(tilde_transform(p)),
            direction,
            tol=tol.rk_tol,
            quad_tol=tol.quad_tol,
            debug=Kit._debug,
        )
