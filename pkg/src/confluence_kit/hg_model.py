"""Matrices and parameter frames of the generalized hypergeometric system.

The data ``alpha = (alpha_1..alpha_n)``, ``beta = (beta_1..beta_{n-1})``
and ``rho = beta_n - 1`` determine a companion matrix ``A`` with spectrum
``{-alpha_i}`` and ``B = diag(0, ..., 0, 1)``. ``rho=None`` marks the
irregular limit system.
"""

import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .branches import PRINCIPAL, UPPER_CUT, Branch
from .codec import decode_complex, encode_complex
from .constants import (
    MAX_ORDER,
    POLE_DISTANCE,
    RESONANCE_TOL,
    SECTOR_ETA,
    SECTOR_MIN_ABS_RHO,
)
from .cplx_core import CMat, inv
from .exceptions import ConfigError, DimensionError, ResonanceError, SectorError
from .systems import ConfluentFamily, OkuboSystem

_PARAM_KEYS = {"alpha", "beta", "rho"}

_UNSET: Any = object()


@dataclass(frozen=True)
class HGParams:
    alpha: tuple[complex, ...]
    beta_head: tuple[complex, ...]
    rho: Optional[complex] = None

    def __post_init__(self):
        alpha = tuple(complex(a) for a in self.alpha)
        beta = tuple(complex(b) for b in self.beta_head)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta_head", beta)
        if self.rho is not None:
            object.__setattr__(self, "rho", complex(self.rho))
        n = len(alpha)
        if n < 2 or n > MAX_ORDER:
            raise DimensionError(f"Order n must lie in [2, {MAX_ORDER}], got {n}")
        if len(beta) != n - 1:
            raise DimensionError(
                f"Expected {n - 1} beta values for n={n}, got {len(beta)}"
            )
        values = alpha + beta + (() if self.rho is None else (self.rho,))
        if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in values):
            raise ConfigError("Parameters must be finite")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def gamma(self) -> complex:
        """``sum(beta_j - 1) - sum(alpha_i)``; always recomputed."""
        return sum(b - 1 for b in self.beta_head) - sum(self.alpha)

    @property
    def is_limit(self) -> bool:
        return self.rho is None

    @property
    def beta(self) -> tuple[complex, ...]:
        """All n beta values, ``beta_n = rho + 1`` included."""
        return self.beta_head + (self.finite_rho() + 1,)

    @property
    def diagonal(self) -> tuple[complex, ...]:
        """Diagonal of ``At_D``: ``(1-beta_1, ..., 1-beta_{n-1}, gamma)``."""
        return tuple(1 - b for b in self.beta_head) + (self.gamma,)

    def finite_rho(self) -> complex:
        if self.rho is None:
            raise ConfigError("This operation needs a finite rho")
        return self.rho

    def with_rho(self, rho: Optional[complex]) -> "HGParams":
        return HGParams(self.alpha, self.beta_head, rho)

    @classmethod
    def from_json(cls, data: Union[str, Mapping[str, Any]]) -> "HGParams":
        """Parse ``{"alpha": [...], "beta": [...], "rho": [re, im] | "inf"}``.

        Raises:
            ConfigError: On unknown or missing keys and malformed values
        """
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ConfigError(f"Invalid parameter JSON: {e}") from e
        if not isinstance(data, Mapping):
            raise ConfigError("Parameter JSON must be an object")
        unknown = set(data) - _PARAM_KEYS
        if unknown:
            raise ConfigError(f"Unknown parameter keys: {sorted(unknown)}")
        missing = {"alpha", "beta"} - set(data)
        if missing:
            raise ConfigError(f"Missing parameter keys: {sorted(missing)}")
        for key in ("alpha", "beta"):
            if not isinstance(data[key], list):
                raise ConfigError(f"'{key}' must be a list")
        alpha = [decode_complex(a, "alpha") for a in data["alpha"]]
        beta = [decode_complex(b, "beta") for b in data["beta"]]
        raw_rho = data.get("rho", "inf")
        rho = None if raw_rho == "inf" else decode_complex(raw_rho, "rho")
        return cls(tuple(alpha), tuple(beta), rho)

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": [encode_complex(a) for a in self.alpha],
            "beta": [encode_complex(b) for b in self.beta_head],
            "rho": "inf" if self.rho is None else encode_complex(self.rho),
        }


@dataclass(frozen=True)
class ParameterSector:
    """Large-|rho| sector P+ or P- of opening ``2*pi - 2*eta``."""

    sign: str
    eta: float = SECTOR_ETA
    min_abs_rho: float = SECTOR_MIN_ABS_RHO

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ConfigError(f"Sector sign must be '+' or '-', got {self.sign!r}")
        if not 0 < self.eta < math.pi / 2:
            raise ConfigError(f"Sector eta must lie in (0, pi/2), got {self.eta}")
        if self.min_abs_rho <= 0:
            raise ConfigError("Sector min_abs_rho must be positive")

    @property
    def branch(self) -> Branch:
        """Branch of ``log rho`` used by the formulas of this sector."""
        return PRINCIPAL if self.sign == "+" else UPPER_CUT

    @property
    def window(self) -> tuple[float, float]:
        if self.sign == "+":
            return (-math.pi + self.eta, math.pi - self.eta)
        return (self.eta, 2 * math.pi - self.eta)

    def arg_in_window(self, rho: complex) -> bool:
        lo, hi = self.window
        return lo < self.branch.arg(rho) < hi

    def contains(self, rho: complex) -> bool:
        return abs(rho) >= self.min_abs_rho and self.arg_in_window(rho)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    distance: float

    def to_json(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "distance": self.distance}


@dataclass(frozen=True)
class ModelFrame:
    R: CMat
    R_inv: CMat
    A_D: CMat
    At_D: CMat
    exponents: tuple[complex, ...] = field(default=())


def _integer_distance(z: complex, nonzero: bool = False) -> float:
    k = round(z.real)
    if nonzero and k == 0:
        k = 1 if z.real >= 0 else -1
    return abs(z - k)


def _nonpositive_distance(z: complex) -> float:
    k = min(0, round(z.real))
    return abs(z - k)


def _lattice_checks(p: HGParams, sign: str) -> list[tuple[str, complex]]:
    rho = p.finite_rho()
    if sign == "+":
        return (
            [(f"1-alpha_{i + 1}+rho", 1 - a + rho) for i, a in enumerate(p.alpha)]
            + [(f"2-beta_{j + 1}+rho", 2 - b + rho) for j, b in enumerate(p.beta_head)]
            + [("1+gamma+rho", 1 + p.gamma + rho)]
        )
    return (
        [(f"alpha_{i + 1}-rho", a - rho) for i, a in enumerate(p.alpha)]
        + [(f"beta_{j + 1}-1-rho", b - 1 - rho) for j, b in enumerate(p.beta_head)]
        + [("-gamma-rho", -p.gamma - rho)]
    )


def validate(p: HGParams, sector: Optional[ParameterSector] = None) -> list[Violation]:
    """Collect every violated non-resonance or sector condition.

    Checks that the eigenvalues ``1 - beta_j`` of the first diagonal block
    do not differ by non-zero integers, that no two of ``beta_1..beta_n``
    differ by an integer, that ``gamma + rho`` is not an integer, and, when
    a sector is given, the argument window, the modulus bound and the
    excluded lattice of Gamma poles.

    Returns:
        List of violations, empty when the parameters are admissible
    """
    out: list[Violation] = []
    head = p.beta_head
    flagged: set[tuple[int, int]] = set()
    for i in range(len(head)):
        for j in range(i + 1, len(head)):
            d = head[i] - head[j]
            dist = _integer_distance(d, nonzero=True)
            if dist < RESONANCE_TOL:
                flagged.add((i, j))
                out.append(
                    Violation(
                        "block_resonance",
                        f"beta_{i + 1} - beta_{j + 1} = {d:.6g} is a non-zero integer",
                        dist,
                    )
                )
    if p.rho is None:
        return out

    beta = p.beta
    for i in range(len(beta)):
        for j in range(i + 1, len(beta)):
            if (i, j) in flagged:
                continue
            d = beta[i] - beta[j]
            dist = _integer_distance(d)
            if dist < RESONANCE_TOL:
                out.append(
                    Violation(
                        "beta_difference",
                        f"beta_{i + 1} - beta_{j + 1} = {d:.6g} is an integer",
                        dist,
                    )
                )
    g = p.gamma + p.rho
    dist = _integer_distance(g)
    if dist < RESONANCE_TOL:
        out.append(
            Violation("gamma_rho_integer", f"gamma + rho = {g:.6g} is an integer", dist)
        )

    if sector is None:
        return out
    if not sector.arg_in_window(p.rho):
        lo, hi = sector.window
        a = sector.branch.arg(p.rho)
        out.append(
            Violation(
                "sector_arg",
                f"arg rho = {a:.6g} is outside the P{sector.sign} window "
                f"({lo:.6g}, {hi:.6g})",
                min(abs(a - lo), abs(a - hi)),
            )
        )
    if abs(p.rho) < sector.min_abs_rho:
        out.append(
            Violation(
                "sector_modulus",
                f"|rho| = {abs(p.rho):.6g} is below {sector.min_abs_rho}",
                sector.min_abs_rho - abs(p.rho),
            )
        )
    for label, z in _lattice_checks(p, sector.sign):
        dist = _nonpositive_distance(z)
        if dist < POLE_DISTANCE:
            out.append(
                Violation("gamma_pole", f"{label} = {z:.6g} is a Gamma pole", dist)
            )
    return out


def ensure_valid(p: HGParams, sector: Optional[ParameterSector] = None) -> None:
    """Raise when :func:`validate` reports anything.

    Raises:
        SectorError: If rho lies outside the sector's window or modulus bound
        ResonanceError: For every other violation
    """
    violations = validate(p, sector)
    if not violations:
        return
    sector_codes = {"sector_arg", "sector_modulus"}
    if all(v.code in sector_codes for v in violations):
        raise SectorError("; ".join(v.message for v in violations))
    raise ResonanceError(
        "Parameters violate: " + "; ".join(v.message for v in violations),
        violations=violations,
    )


def build_companion(p: HGParams) -> CMat:
    """Companion matrix ``A`` with spectrum ``{-alpha_i}``.

    The last row solves ``det(l - A) = prod(l + alpha_i)``. Expanding along
    that row gives ``P(l) = sum_k a_k prod_{i<k}(l - d_i)`` for
    ``P(l) = (l - gamma) prod(l - d_i) - prod(l + alpha_i)``, so the
    ``a_k`` are the Newton coefficients of ``P`` on the nodes ``d_i``.
    """
    n = p.n
    d = [1 - b for b in p.beta_head]
    g = p.gamma
    poly = P.polysub(P.polyfromroots([g, *d]), P.polyfromroots([-a for a in p.alpha]))
    poly = np.asarray(poly, dtype=np.complex128)
    # degrees n and n-1 cancel: both sides are monic with equal trace
    poly = poly[: n - 1] if n > 1 else poly[:1]

    A = np.zeros((n, n), dtype=np.complex128)
    for i in range(n - 1):
        A[i, i] = d[i]
        A[i, i + 1] = 1
    A[n - 1, n - 1] = g
    for k in range(n - 1):
        a_k = complex(P.polyval(d[k], poly)) if poly.size else 0j
        A[n - 1, k] = a_k
        rest = P.polysub(poly, [a_k])
        quotient, _ = P.polydiv(rest, [-d[k], 1])
        poly = np.asarray(quotient, dtype=np.complex128)
        if k < n - 2:
            poly = poly[: n - 2 - k]
    return A


def b_matrix(n: int) -> CMat:
    B = np.zeros((n, n), dtype=np.complex128)
    B[n - 1, n - 1] = 1
    return B


def frame(p: HGParams) -> ModelFrame:
    """Frame matrix ``R`` diagonalizing the block-diagonal part of ``A``.

    Raises:
        ResonanceError: If two of beta_1..beta_{n-1} coincide
    """
    n = p.n
    head = p.beta_head
    for i in range(len(head)):
        for j in range(i + 1, len(head)):
            if abs(head[i] - head[j]) < RESONANCE_TOL:
                raise ResonanceError(
                    f"beta_{i + 1} and beta_{j + 1} coincide; the frame is singular"
                )
    R = np.zeros((n, n), dtype=np.complex128)
    for j in range(n - 1):
        for i in range(j + 1):
            R[i, j] = np.prod([head[l] - head[j] for l in range(i)]) if i else 1
    R[n - 1, n - 1] = 1
    A = build_companion(p)
    A_D = np.zeros_like(A)
    A_D[: n - 1, : n - 1] = A[: n - 1, : n - 1]
    A_D[n - 1, n - 1] = A[n - 1, n - 1]
    diagonal = p.diagonal
    return ModelFrame(
        R=R, R_inv=inv(R), A_D=A_D, At_D=np.diag(diagonal), exponents=diagonal
    )


def build_okubo(p: HGParams, debug: bool = False) -> OkuboSystem:
    """``(s - B) v' = (A + rho) v`` for finite rho."""
    system = OkuboSystem(
        build_companion(p), b_matrix(p.n), p.finite_rho(), debug=debug
    )
    system._print_debug(f"okubo system n={p.n} rho={p.rho:.6g} gamma={p.gamma:.6g}")
    return system


def build_confluent(
    p: HGParams, rho: Optional[complex] = _UNSET, debug: bool = False
) -> ConfluentFamily:
    """The family ``z (z - B/rho) y' = (B + z A) y``; ``rho=None`` is the limit."""
    if rho is _UNSET:
        rho = p.rho
    system = ConfluentFamily(build_companion(p), b_matrix(p.n), rho, debug=debug)
    where = "limit" if rho is None else f"rho={complex(rho):.6g}"
    system._print_debug(f"confluent family n={p.n} {where}")
    return system


def apply_hg_operator(
    alpha: Sequence[complex],
    beta: Sequence[complex],
    exponent: complex,
    coeffs: Iterable[complex],
) -> np.ndarray:
    """Apply ``s (delta + alpha) - (delta + beta - 1)`` to a power series.

    The input is ``sum_k a_k s^(exponent + k)``; the result is returned in
    the same form, one coefficient longer. ``delta`` is ``s d/ds``.
    """
    a = np.asarray(list(coeffs), dtype=np.complex128)
    alpha = np.asarray(alpha, dtype=np.complex128)
    beta = np.asarray(beta, dtype=np.complex128)
    if alpha.size != beta.size:
        raise DimensionError(
            f"Operator needs as many alpha as beta values, got {alpha.size} "
            f"and {beta.size}"
        )
    out = np.zeros(a.size + 1, dtype=np.complex128)
    for k in range(a.size + 1):
        e = complex(exponent) + k
        if k >= 1:
            out[k] += np.prod(e - 1 + alpha) * a[k - 1]
        if k < a.size:
            out[k] -= np.prod(e + beta - 1) * a[k]
    return out
