"""Numerical analytic continuation of linear systems along complex paths.

A path is a chain of straight and circular segments, each parameterized
over ``t in [0, 1]``. Along a segment ``x(t)`` the system ``Y' = M(x) Y``
becomes the real-time problem ``dY/dt = x'(t) M(x(t)) Y``, which
``scipy.integrate.solve_ivp`` integrates on complex state vectors.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Callable, Optional, Union

import numpy as np
from scipy.integrate import solve_ivp

from .constants import TOL_MAX, TOL_MIN, TWO_PI
from .cplx_core import CMat, identity, lu_solve
from .exceptions import ConfigError, PathError
from .systems import LinearSystem

DEFAULT_METHOD = "DOP853"

_CONTINUITY_TOL = 1e-12


@dataclass(frozen=True)
class LineSegment:
    start: complex
    end: complex

    def point(self, t: float) -> complex:
        return self.start + (self.end - self.start) * t

    def tangent(self, t: float) -> complex:
        return self.end - self.start

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def distance_to(self, p: complex) -> float:
        d = self.end - self.start
        if d == 0:
            return abs(p - self.start)
        t = ((p - self.start) * d.conjugate()).real / abs(d) ** 2
        return abs(p - self.point(min(1.0, max(0.0, t))))

    def reversed(self) -> "LineSegment":
        return LineSegment(self.end, self.start)


@dataclass(frozen=True)
class ArcSegment:
    """``center + radius * exp(i (theta0 + sweep t))``.

    ``sweep > 0`` runs counterclockwise.
    """

    center: complex
    radius: float
    theta0: float
    sweep: float

    def point(self, t: float) -> complex:
        return self.center + self.radius * np.exp(1j * (self.theta0 + self.sweep * t))

    def tangent(self, t: float) -> complex:
        return 1j * self.sweep * (self.point(t) - self.center)

    @property
    def start(self) -> complex:
        return complex(self.point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.point(1.0))

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def distance_to(self, p: complex) -> float:
        d = p - self.center
        if abs(self.sweep) >= TWO_PI or d == 0:
            return abs(abs(d) - self.radius)
        # angular position of p relative to the start, in the sweep direction
        direction = math.copysign(1.0, self.sweep)
        rel = (math.atan2(d.imag, d.real) - self.theta0) * direction % TWO_PI
        if rel <= abs(self.sweep):
            return abs(abs(d) - self.radius)
        return min(abs(p - self.start), abs(p - self.end))

    def reversed(self) -> "ArcSegment":
        end_angle = self.theta0 + self.sweep
        return ArcSegment(self.center, self.radius, end_angle, -self.sweep)


Segment = Union[LineSegment, ArcSegment]


@dataclass(frozen=True)
class PathSpec:
    segments: tuple[Segment, ...]
    clearance: float = 0.0
    label: str = ""

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for a, b in zip(segs, segs[1:]):
            if abs(a.end - b.start) > _CONTINUITY_TOL:
                raise PathError(
                    f"Path '{self.label}' is discontinuous at {a.end}", location=a.end
                )

    @classmethod
    def line(cls, a: complex, b: complex, clearance: float = 0.0, label: str = ""):
        return cls((LineSegment(complex(a), complex(b)),), clearance, label)

    @classmethod
    def polyline(
        cls, points: Sequence[complex], clearance: float = 0.0, label: str = ""
    ) -> "PathSpec":
        pts = [complex(z) for z in points]
        segs = tuple(LineSegment(a, b) for a, b in zip(pts, pts[1:]))
        return cls(segs, clearance, label)

    @property
    def start(self) -> complex:
        return self.segments[0].start if self.segments else 0j

    @property
    def end(self) -> complex:
        return self.segments[-1].end if self.segments else 0j

    @property
    def length(self) -> float:
        return float(sum(s.length for s in self.segments))

    def reversed(self) -> "PathSpec":
        segs = tuple(s.reversed() for s in reversed(self.segments))
        return PathSpec(segs, self.clearance, f"reverse({self.label})")

    def then(self, other: "PathSpec") -> "PathSpec":
        """Concatenation: first ``self``, then ``other``."""
        return PathSpec(
            self.segments + other.segments,
            min(self.clearance, other.clearance),
            f"{self.label}*{other.label}",
        )

    def min_distance(
        self, points: Sequence[complex]
    ) -> tuple[float, Optional[complex]]:
        best, where = math.inf, None
        for p in points:
            for seg in self.segments:
                d = seg.distance_to(complex(p))
                if d < best:
                    best, where = d, complex(p)
        return best, where

    def check_clearance(self, points: Sequence[complex]) -> None:
        """Raise PathError if a singular point comes closer than ``clearance``."""
        dist, where = self.min_distance(points)
        if where is not None and dist < max(self.clearance, 1e-12):
            raise PathError(
                f"Path '{self.label}' passes {dist:.3g} from singular point {where} "
                f"(clearance {self.clearance:.3g})",
                location=where,
            )


@dataclass(frozen=True)
class LoopSpec:
    """Loop from ``base`` once around ``around``; ``orientation`` is +1 or -1."""

    base: complex
    around: complex
    orientation: int = 1
    radius: Optional[float] = None

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ConfigError(
                f"Loop orientation must be +1 or -1, got {self.orientation}"
            )

    def to_path(self, singular_points: Sequence[complex]) -> PathSpec:
        """Segment in, full circle, segment out.

        The radius defaults to ``min(0.5 * distance to the nearest other
        singular point, |base - around|)``.
        """
        base, c = complex(self.base), complex(self.around)
        if base == c:
            raise PathError("Loop base point coincides with its center", location=c)
        dists = [abs(complex(p) - c) for p in singular_points]
        others = [d for d in dists if d > 0]
        gap = min(others) if others else abs(base - c)
        r = self.radius if self.radius is not None else min(0.5 * gap, abs(base - c))
        theta = math.atan2((base - c).imag, (base - c).real)
        on_circle = c + r * np.exp(1j * theta)
        segs: list[Segment] = []
        inward = LineSegment(base, complex(on_circle))
        if inward.length > 0:
            segs.append(inward)
        segs.append(ArcSegment(c, r, theta, self.orientation * TWO_PI))
        if inward.length > 0:
            segs.append(inward.reversed())
        clearance = 0.1 * min(gap, r)
        return PathSpec(tuple(segs), clearance, f"loop({c:.4g})")


@dataclass(frozen=True)
class TransportResult:
    propagator: CMat
    err_est: float
    steps: int


@dataclass(frozen=True)
class SegmentSolution:
    value: np.ndarray
    steps: int
    dense: Any = None


def check_tol(tol: float) -> None:
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ConfigError(f"Tolerance must lie in [{TOL_MIN}, {TOL_MAX}], got {tol}")


def solve_segment(
    system: LinearSystem,
    segment: Segment,
    y0: np.ndarray,
    tol: float,
    method: str = DEFAULT_METHOD,
    dense_output: bool = False,
) -> SegmentSolution:
    """Integrate ``system`` along one segment starting from ``y0`` (any shape)."""
    y0 = np.asarray(y0, dtype=np.complex128)
    if segment.length == 0:
        return SegmentSolution(y0.copy(), 0)
    shape = y0.shape

    def fun(t: float, y: np.ndarray) -> np.ndarray:
        x = segment.point(t)
        return (segment.tangent(t) * system.derivative(x, y.reshape(shape))).ravel()

    sol = solve_ivp(
        fun,
        (0.0, 1.0),
        y0.ravel(),
        method=method,
        rtol=tol,
        atol=tol * 1e-3,
        dense_output=dense_output,
    )
    if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
        where = complex(segment.point(float(sol.t[-1])))
        raise PathError(
            f"Integration failed near {where}: {sol.message}", location=where
        )
    return SegmentSolution(sol.y[:, -1].reshape(shape), len(sol.t) - 1, sol.sol)


def _run(
    system: LinearSystem, path: PathSpec, y0: np.ndarray, tol: float, method: str
) -> tuple[np.ndarray, int]:
    check_tol(tol)
    path.check_clearance(system.singular_points)
    y = np.asarray(y0, dtype=np.complex128)
    total = 0
    for k, seg in enumerate(path.segments):
        out = solve_segment(system, seg, y, tol, method)
        y = out.value
        total += out.steps
        system._print_debug(
            f"transport {path.label or 'path'} segment {k} "
            f"({type(seg).__name__}) steps={out.steps} err_est={out.steps * tol:.2e}"
        )
    return y, total


def transport(
    system: LinearSystem, path: PathSpec, tol: float, method: str = DEFAULT_METHOD
) -> TransportResult:
    """Propagator ``P`` with ``Y(end) = P Y(start)`` for solutions along ``path``.

    Args:
        system: Linear system ``Y' = M(x) Y``
        path: Path clear of the system's singular points
        tol: Relative local error tolerance, in [1e-14, 1e-3]
        method: solve_ivp explicit Runge-Kutta method

    Returns:
        TransportResult with the propagator, ``steps * tol`` as error
        estimate and the accepted step count

    Raises:
        PathError: If the path violates its clearance or integration breaks down
    """
    P, steps = _run(system, path, identity(system.n), tol, method)
    return TransportResult(P, steps * tol, steps)


def continue_value(
    system: LinearSystem,
    v0: Any,
    path: PathSpec,
    tol: float,
    method: str = DEFAULT_METHOD,
) -> np.ndarray:
    """Continue a single solution vector (or matrix of columns) along ``path``."""
    value, _ = _run(system, path, np.asarray(v0, dtype=np.complex128), tol, method)
    return value


BasisProvider = Union[CMat, Callable[[complex], CMat]]


def monodromy_numeric(
    system: LinearSystem,
    basis_provider: BasisProvider,
    loop: LoopSpec,
    tol: float,
    method: str = DEFAULT_METHOD,
) -> CMat:
    """Monodromy ``F^-1 P F`` of the basis ``F(base)`` along ``loop``.

    Raises:
        SingularMatrixError: If the basis is not invertible at the base point
    """
    F = basis_provider(loop.base) if callable(basis_provider) else basis_provider
    F = np.asarray(F, dtype=np.complex128)
    path = loop.to_path(system.singular_points)
    result = transport(system, path, tol, method)
    return lu_solve(F, result.propagator @ F)
