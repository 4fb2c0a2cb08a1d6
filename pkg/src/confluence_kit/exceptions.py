"""Error types raised by confluence_kit.

Everything derives from ``ConfluenceError``, itself a ``ValueError``, so
code that guards calls with ``except ValueError`` keeps working.
"""

from typing import Any, Optional


class ConfluenceError(ValueError):
    """Base class for all library errors."""


class ConfigError(ConfluenceError):
    """Invalid tolerance, unknown configuration key or malformed input."""


class DimensionError(ConfluenceError):
    """Matrix or parameter shapes do not fit the operation."""


class SingularMatrixError(ConfluenceError):
    """A matrix is singular to working tolerance."""

    def __init__(self, message: str, smallest_pivot: float):
        super().__init__(message)
        self.smallest_pivot = smallest_pivot


class PoleError(ConfluenceError):
    """A Gamma argument sits on (or too close to) a pole."""

    def __init__(self, message: str, label: str, distance: float):
        super().__init__(message)
        self.label = label
        self.distance = distance


class ResonanceError(ConfluenceError):
    """Parameters violate a non-resonance assumption."""

    def __init__(self, message: str, violations: Optional[list[Any]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class SectorError(ConfluenceError):
    """rho lies outside the requested parameter sector."""


class ConvergenceError(ConfluenceError):
    """An iterative method or series did not converge."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


class PathError(ConfluenceError):
    """A continuation path is invalid or integration broke down on it."""

    def __init__(self, message: str, location: Optional[complex] = None):
        super().__init__(message)
        self.location = location
