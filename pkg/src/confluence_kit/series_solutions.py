"""Frobenius solution bases of the Okubo system at ``s = 0`` and ``s = 1``.

Columns ``1..n-1`` of ``V~+`` come from the local series at the origin,
column ``n`` from the series at ``s = 1`` whose coefficients are the
``rho``-independent ``c_k``. Components ``2..n`` follow from the chain
``v_{i+1} = (delta_s + beta_i - 1 - rho) v_i`` applied exactly to the
coefficient arrays.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import special

from .branches import PRINCIPAL, UPPER_CUT, Branch
from .constants import (
    CK_MAX_ORDER,
    DEFAULT_SERIES_TOL,
    SERIES_MAX_TERMS,
    SERIES_QUIET_TERMS,
    SERIES_RADIUS,
)
from .exceptions import ConfigError, ConvergenceError, DimensionError
from .hg_model import HGParams
from .special_fn import check_pole, log_gamma

_FIRST_CHUNK = 64


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    bound: float
    terms: int


@dataclass(frozen=True)
class SeriesAtOne:
    """Coefficients ``c_0..c_K`` of the series at ``s = 1``; ``c_0 = 1``."""

    c: np.ndarray

    @property
    def order(self) -> int:
        return int(self.c.size - 1)


@dataclass(frozen=True)
class ColumnValue:
    value: np.ndarray
    trunc_error: float
    terms: int


@dataclass(frozen=True)
class FrobeniusColumn:
    """Solution column ``x**exponent * sum_k coeffs[:, k] x**k``, ``x = s - center``."""

    exponent: complex
    center: complex
    coeffs: np.ndarray
    branch: Branch

    def evaluate(self, s: complex) -> ColumnValue:
        x = complex(s) - self.center
        r = abs(x)
        if r > SERIES_RADIUS:
            raise ConvergenceError(
                f"Series at {self.center} evaluated at distance {r:.3g} "
                f"beyond radius {SERIES_RADIUS}"
            )
        if x == 0:
            raise DimensionError(f"Series evaluated at its center {self.center}")
        K = self.coeffs.shape[1]
        powers = x ** np.arange(K)
        prefactor = self.branch.power(x, self.exponent)
        value = prefactor * (self.coeffs @ powers)
        return ColumnValue(value, float(abs(prefactor) * self._tail(r)), K)

    def _tail(self, r: float) -> float:
        """Bound on the omitted terms at radius ``r``.

        Rows grow like powers of ``k``, so the last coefficient ratio (at
        least 1) dominates every later one and sets the geometric rate.
        """
        mags = np.abs(self.coeffs)
        K = mags.shape[1]
        last = mags[:, -1]
        growth = 1.0
        if K > 1:
            prev = mags[:, -2]
            nz = prev > 0
            if np.any(nz):
                growth = max(growth, float(np.max(last[nz] / prev[nz])))
        t = r * growth
        if t >= 1:
            return math.inf
        return float(np.max(last)) * r ** (K - 1) * t / (1 - t)


def _check_radius(r: float) -> None:
    if r > SERIES_RADIUS:
        raise ConvergenceError(
            f"|s| = {r:.3g} exceeds the evaluation radius {SERIES_RADIUS}"
        )


def _quiet_index(magnitudes: np.ndarray, tol: float) -> Optional[int]:
    """First index ending a run of negligible terms, or None."""
    scale = np.cumsum(magnitudes)
    # leading zero coefficients never count as a settled tail
    quiet = (scale > 0) & (magnitudes <= tol * scale)
    run = 0
    for k, q in enumerate(quiet):
        run = run + 1 if q else 0
        if run >= SERIES_QUIET_TERMS:
            return k
    return None


def _series_terms(make: Callable[[int], np.ndarray], r: float, tol: float) -> int:
    """Number of coefficients needed at radius ``r``."""
    K = _FIRST_CHUNK
    while K <= SERIES_MAX_TERMS:
        row = make(K)
        k = _quiet_index(np.abs(row) * r ** np.arange(row.size), tol)
        if k is not None:
            return k + 1
        K *= 2
    raise ConvergenceError(
        f"Series did not settle within {SERIES_MAX_TERMS} terms at radius {r:.3g}",
        iterations=SERIES_MAX_TERMS,
    )


def pfq_coeffs(num: list[complex], den: list[complex], K: int) -> np.ndarray:
    """Coefficients ``(num)_k / ((den)_k k!)`` for ``k < K``."""
    for i, d in enumerate(den):
        check_pole(d, f"den[{i}]")
    num_a = np.asarray(num, dtype=np.complex128)
    den_a = np.asarray(den, dtype=np.complex128)
    out = np.empty(K, dtype=np.complex128)
    t = 1.0 + 0.0j
    for k in range(K):
        out[k] = t
        t = t * np.prod(num_a + k) / (np.prod(den_a + k) * (k + 1))
    return out


def pfq(
    num: list[complex], den: list[complex], s: complex, tol: float = DEFAULT_SERIES_TOL
) -> SeriesValue:
    """Generalized hypergeometric series ``pFq(num; den; s)`` for ``|s| <= 0.9``.

    Summation stops after three consecutive terms below ``tol`` times the
    running sum of magnitudes.

    Raises:
        ConvergenceError: If |s| exceeds the evaluation radius
        PoleError: If a lower parameter is a non-positive integer
    """
    s = complex(s)
    r = abs(s)
    _check_radius(r)
    if s == 0:
        return SeriesValue(1.0 + 0.0j, 0.0, 1)
    K = _series_terms(lambda m: pfq_coeffs(num, den, m), r, tol)
    coeffs = pfq_coeffs(num, den, K)
    terms = coeffs * s ** np.arange(K)
    bound = float(abs(terms[-1]) * r / (1 - r))
    return SeriesValue(complex(np.sum(terms)), bound, K)


def _ck_normalized(p: HGParams, K: int) -> np.ndarray:
    """``c_k / k!`` for ``k < K`` by dynamic programming over partial sums."""
    alpha, beta = p.alpha, p.beta_head
    G = np.zeros(K, dtype=np.complex128)
    G[0] = 1
    cum = 0j
    for j in range(p.n - 1):
        cum += beta[j] - alpha[j]
        q = np.ones(K, dtype=np.complex128)
        c = beta[j] - alpha[j + 1]
        for i in range(1, K):
            q[i] = q[i - 1] * (c + i - 1) / i
        new = np.zeros(K, dtype=np.complex128)
        for m in range(K):
            i = np.arange(1, m + 1)
            # (cum + m - i)_i / (m - i + 1)_i for i = 0..m
            steps = (cum + m - i) / (m - i + 1)
            ratio = np.concatenate(([1.0 + 0.0j], np.cumprod(steps)))
            idx = np.arange(m + 1)
            new[m] = np.sum(G[m - idx] * ratio * q[idx])
        G = new
    return G


def ck_coeffs(p: HGParams, K: int) -> SeriesAtOne:
    """Coefficients ``c_0..c_K`` of the series solution at ``s = 1``.

    ``c_k`` is the sum over compositions ``i_1 + ... + i_{n-1} = k`` of
    ``prod_j (B_j + i_1 + ... + i_{j-1})_{i_j} (beta_j - alpha_{j+1})_{i_j} / i_j!``
    with ``B_j = sum_{l<=j} (beta_l - alpha_l)``. Independent of rho.
    """
    if not 0 <= K <= CK_MAX_ORDER:
        raise ConfigError(f"K must lie in [0, {CK_MAX_ORDER}], got {K}")
    G = _ck_normalized(p.with_rho(None), K + 1)
    factorials = special.factorial(np.arange(K + 1), exact=False)
    return SeriesAtOne(G * factorials)


@lru_cache(maxsize=256)
def _zero_table(p: HGParams, j: int, K: int) -> np.ndarray:
    beta = p.beta
    bj = beta[j]
    num = [a + 1 - bj for a in p.alpha]
    den = [b + 1 - bj for i, b in enumerate(beta) if i != j]
    C = np.empty((p.n, K), dtype=np.complex128)
    C[0] = pfq_coeffs(num, den, K)
    k = np.arange(K)
    for i in range(p.n - 1):
        C[i + 1] = (k + beta[i] - bj) * C[i]
    return C


@lru_cache(maxsize=64)
def _one_table(p: HGParams, K: int) -> np.ndarray:
    n = p.n
    b = p.gamma + p.finite_rho()
    check_pole(b + 1, "1+gamma+rho")
    total = K + n
    G = _ck_normalized(p.with_rho(None), total)
    k = np.arange(total)
    # k! Gamma(b+1) / Gamma(b+k+n) = k! / (b+1)_{k+n-1}
    log_w = (
        special.loggamma(k + 1.0)
        + log_gamma(b + 1, "1+gamma+rho")
        - special.loggamma(b + k + n + 0j)
    )
    g = (-1.0) ** k * G * np.exp(log_w)
    h = np.zeros(total + n - 1, dtype=np.complex128)
    h[n - 1 :] = g
    rows = [h]
    m = np.arange(h.size)
    for i in range(n - 1):
        cur = rows[-1]
        shift = p.beta_head[i] - 1 - p.rho
        nxt = (b + m[:-1] + 1) * cur[1:] + (b + m[:-1] + shift) * cur[:-1]
        rows.append(nxt)
        m = m[:-1]
    return np.array([row[:K] for row in rows])


def zero_column(
    p: HGParams,
    j: int,
    r: float,
    tol: float = DEFAULT_SERIES_TOL,
    branch: Branch = PRINCIPAL,
) -> FrobeniusColumn:
    """Floquet column ``j`` (0-based) at the origin, sized for radius ``r``."""
    if not 0 <= j < p.n - 1:
        raise DimensionError(
            f"Column index at s=0 must lie in [0, {p.n - 2}], got {j}"
        )
    _check_radius(r)
    K = _series_terms(lambda m: _zero_table(p, j, m)[0], r, tol)
    K = _FIRST_CHUNK * int(np.ceil((K + p.n) / _FIRST_CHUNK))
    exponent = 1 - p.beta_head[j] + p.finite_rho()
    return FrobeniusColumn(exponent, 0j, _zero_table(p, j, K), branch)


def one_column(
    p: HGParams, r: float, tol: float = DEFAULT_SERIES_TOL
) -> FrobeniusColumn:
    """Floquet column ``n`` at ``s = 1``; ``(s-1)**c`` uses the window (0, 2*pi]."""
    _check_radius(r)
    K = _series_terms(lambda m: _one_table(p, m)[0], r, tol)
    K = _FIRST_CHUNK * int(np.ceil((K + p.n) / _FIRST_CHUNK))
    exponent = p.gamma + p.finite_rho()
    return FrobeniusColumn(exponent, 1.0 + 0j, _one_table(p, K), UPPER_CUT)


def okubo_column_zero(
    p: HGParams,
    j: int,
    s: complex,
    tol: float = DEFAULT_SERIES_TOL,
    branch: Branch = PRINCIPAL,
) -> np.ndarray:
    """Column ``j`` (0-based) of ``V~+(s)`` from the series at the origin."""
    return zero_column(p, j, abs(complex(s)), tol, branch).evaluate(s).value


def okubo_column_one(
    p: HGParams, s: complex, tol: float = DEFAULT_SERIES_TOL
) -> np.ndarray:
    """Last column of ``V~+(s)`` from the series at ``s = 1``."""
    return one_column(p, abs(complex(s) - 1), tol).evaluate(s).value


def confluent_column(
    p: HGParams,
    j: int,
    z: complex,
    tol: float = DEFAULT_SERIES_TOL,
    branch: Branch = PRINCIPAL,
) -> np.ndarray:
    """Column ``j`` of ``Y~+(z)`` for the confluent family, ``|rho z| <= 0.9``.

    ``z**(1 - beta_j) * sum_k C[:, k] (rho z)**k`` with the same coefficient
    table as the Okubo column, so that ``Y~+ = (rho z)**-rho V~+(rho z) rho**-At_D``.
    """
    z = complex(z)
    if z == 0:
        raise DimensionError("Confluent column evaluated at z = 0")
    t = p.finite_rho() * z
    col = zero_column(p, j, abs(t), tol)
    K = col.coeffs.shape[1]
    return branch.power(z, 1 - p.beta_head[j]) * (col.coeffs @ (t ** np.arange(K)))


def assemble_floquet(
    p: HGParams,
    s: complex,
    tol: float = DEFAULT_SERIES_TOL,
    branch: Branch = PRINCIPAL,
) -> np.ndarray:
    """``V~+(s)`` at a point where both series converge (default base point 1/2).

    ``branch`` fixes ``s**(1 - beta_j + rho)``; ``(s - 1)**(gamma + rho)``
    always uses the window (0, 2*pi].
    """
    cols = [okubo_column_zero(p, j, s, tol, branch) for j in range(p.n - 1)]
    cols.append(okubo_column_one(p, s, tol))
    return np.column_stack(cols)
