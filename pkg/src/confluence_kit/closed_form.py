"""Explicit monodromy, connection and Stokes data of the hypergeometric family.

All matrices live in the tilde frame, where the block-diagonal part of
``A`` is diagonal. Gamma products are summed as log-Gamma values and
exponentiated once, together with the ``rho`` powers they come with, so
``|rho|`` up to 1e6 does not overflow.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .branches import PRINCIPAL, UPPER_CUT, Branch
from .constants import BASE_POINT
from .cplx_core import CMat, diag_power, identity, inv, inv_diagonal
from .hg_model import HGParams, ParameterSector, ensure_valid, frame
from .special_fn import gamma_ratio, log_gamma_quotient

_TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class FormalMultipliers:
    e: np.ndarray
    log_e: np.ndarray


@dataclass(frozen=True)
class ConnectionData:
    xi: np.ndarray
    eta: np.ndarray
    log_xi: np.ndarray
    log_eta: np.ndarray


@dataclass(frozen=True)
class MonodromySet:
    m0_plus: CMat
    m1_plus: CMat
    m0_minus: CMat
    m1_minus: CMat
    C: CMat


@dataclass(frozen=True)
class StokesSet:
    """Stokes matrices with the formal monodromies and the assembled loops.

    ``M0`` and ``M1`` are the monodromies around ``z = 0`` and ``z = 1/rho``:
    ``N0 S_U`` and ``S_L N_1overrho`` for sign ``+``, ``N0 S_L`` and
    ``N S_U N0^-1`` for sign ``-``.
    """

    S_U: CMat
    S_L: CMat
    N0: CMat
    N_1overrho: CMat
    N: CMat
    M0: CMat
    M1: CMat
    sign: str
    branch: Branch


def _at(p: HGParams, rho: Optional[complex]) -> HGParams:
    return p if rho is None else p.with_rho(rho)


def _others(values: tuple[complex, ...], j: int) -> list[tuple[int, complex]]:
    return [(i, v) for i, v in enumerate(values) if i != j]


def multipliers(p: HGParams, rho: Optional[complex] = None) -> FormalMultipliers:
    """Formal monodromy multipliers.

    ``e_j = exp(2 pi i (1 - beta_j + rho))`` for ``j < n`` and
    ``e_n = exp(2 pi i (gamma + rho))``.
    """
    p = _at(p, rho)
    r = p.finite_rho()
    log_e = np.array(
        [_TWO_PI_I * (1 - b + r) for b in p.beta_head] + [_TWO_PI_I * (p.gamma + r)],
        dtype=np.complex128,
    )
    return FormalMultipliers(np.exp(log_e), log_e)


def _log_one_minus_exp(x: np.ndarray) -> np.ndarray:
    """``log(1 - exp(x))`` without forming ``exp(x)`` when it overflows."""
    x = np.asarray(x, dtype=np.complex128)
    big = x.real > 0
    safe = np.where(big, -x, x)
    out = np.log1p(-np.exp(safe))
    # 1 - e^x = -e^x (1 - e^-x)
    return np.where(big, x + 1j * math.pi + out, out)


def _log_xi(p: HGParams, j: int) -> complex:
    beta, r, g = p.beta, p.finite_rho(), p.gamma
    numer = [("1+gamma+rho", 1 + g + r)] + [
        (f"beta_{j + 1}-beta_{i + 1}", beta[j] - b) for i, b in _others(beta, j)
    ]
    denom = [
        (f"beta_{j + 1}-alpha_{i + 1}", beta[j] - a) for i, a in enumerate(p.alpha)
    ]
    return 1j * math.pi * (g + r + p.n - 1) + log_gamma_quotient(numer, denom)


def _log_eta(p: HGParams, j: int) -> complex:
    beta, r, g = p.beta, p.finite_rho(), p.gamma
    numer = [("-gamma-rho", -g - r)] + [
        (f"1-beta_{j + 1}+beta_{i + 1}", 1 - beta[j] + b) for i, b in _others(beta, j)
    ]
    denom = [
        (f"1-beta_{j + 1}+alpha_{i + 1}", 1 - beta[j] + a)
        for i, a in enumerate(p.alpha)
    ]
    return -1j * math.pi * (g + r) + log_gamma_quotient(numer, denom)


def connection_data(p: HGParams, rho: Optional[complex] = None) -> ConnectionData:
    """Connection coefficients ``xi_j`` and ``eta_j``, ``j = 1..n-1``.

    Raises:
        PoleError: Naming the Gamma argument that hit a pole
    """
    p = _at(p, rho)
    log_xi = np.array([_log_xi(p, j) for j in range(p.n - 1)], dtype=np.complex128)
    log_eta = np.array([_log_eta(p, j) for j in range(p.n - 1)], dtype=np.complex128)
    return ConnectionData(np.exp(log_xi), np.exp(log_eta), log_xi, log_eta)


def connection_matrix(p: HGParams, rho: Optional[complex] = None) -> CMat:
    """``C~`` with ``V~- = V~+ C~``.

    Identity with last column ``-xi`` and last row ``-eta``.
    """
    cd = connection_data(p, rho)
    n = len(cd.xi) + 1
    C = identity(n)
    C[: n - 1, n - 1] = -cd.xi
    C[n - 1, : n - 1] = -cd.eta
    return C


def branch_shift(p: HGParams, branch: Branch, s: complex = BASE_POINT) -> CMat:
    """Diagonal ``D``: ``V~+`` on ``branch`` is the principal ``V~+`` times ``D``.

    Only the powers ``s**(1 - beta_j + rho)`` at the origin depend on the
    branch; the last entry is 1.
    """
    shift = branch.log(s) - PRINCIPAL.log(s)
    r = p.finite_rho()
    exponents = [1 - b + r for b in p.beta_head]
    return np.diag(np.append(np.exp(np.multiply(exponents, shift)), 1.0 + 0j))


def monodromies(
    p: HGParams, rho: Optional[complex] = None, branch: Branch = PRINCIPAL
) -> MonodromySet:
    """Monodromies of ``V~+`` and ``V~-`` around 0 and 1, based at ``s = 1/2``.

    ``V~-`` is the normalized co-Floquet basis ``V~+ C~ D_C``, so the returned
    ``C`` is ``C~ D_C`` and ``m_minus = C^-1 m_plus C`` for both loops. On
    another ``branch`` at the origin ``V~+`` becomes ``V~+ D`` (see
    :func:`branch_shift`): ``m_plus`` is conjugated by ``D``, ``C`` becomes
    ``D^-1 C`` and ``V~-`` stays put.
    """
    p = _at(p, rho)
    n = p.n
    e = multipliers(p).e
    cd = connection_data(p)
    k = n - 1

    m0p = np.diag(np.append(e[:k], 1.0)).astype(np.complex128)
    m0p[:k, k] = cd.xi * (e[:k] - 1)

    m1p = identity(n)
    m1p[k, :k] = cd.eta * (e[k] - 1)
    m1p[k, k] = e[k]

    m0m = np.diag(np.append(e[:k], 1.0)).astype(np.complex128)
    m0m[k, :k] = cd.eta * (e[:k] - 1)

    m1m = identity(n)
    m1m[:k, k] = cd.xi * (e[k] - 1)
    m1m[k, k] = e[k]

    C = connection_matrix(p) @ co_floquet_normalizer(p)
    D = branch_shift(p, branch)
    D_inv = inv_diagonal(D)
    return MonodromySet(D_inv @ m0p @ D, D_inv @ m1p @ D, m0m, m1m, D_inv @ C)


def co_floquet_normalizer(p: HGParams, rho: Optional[complex] = None) -> CMat:
    """``blockdiag((I - xi eta^T)^-1, (1 - eta^T xi)^-1)``.

    ``V~+ C~`` times this matrix has the co-Floquet normalization; its
    inverse determinant is ``det C~ = 1 - eta^T xi``.
    """
    cd = connection_data(p, rho)
    k = cd.xi.size
    D = identity(k + 1)
    D[:k, :k] = inv(np.eye(k) - np.outer(cd.xi, cd.eta))
    D[k, k] = 1.0 / (1.0 - cd.eta @ cd.xi)
    return D


def formal_monodromies(
    p: HGParams, rho: Optional[complex] = None
) -> tuple[CMat, CMat, CMat]:
    """``N0 = diag(exp(2 pi i (1 - beta_j)), exp(-2 pi i rho))``, ``N_1/rho``, ``N``."""
    p = _at(p, rho)
    r = p.finite_rho()
    N0 = np.diag(
        [np.exp(_TWO_PI_I * (1 - b)) for b in p.beta_head] + [np.exp(-_TWO_PI_I * r)]
    ).astype(np.complex128)
    N1 = identity(p.n)
    N1[-1, -1] = np.exp(_TWO_PI_I * (p.gamma + r))
    return N0, N1, N0 @ N1


def _sector_branch(sign: str) -> Branch:
    return PRINCIPAL if sign == "+" else UPPER_CUT


def _assemble(p: HGParams, S_U: CMat, S_L: CMat, sign: str) -> StokesSet:
    N0, N1, N = formal_monodromies(p)
    if sign == "+":
        M0, M1 = N0 @ S_U, S_L @ N1
    else:
        M0, M1 = N0 @ S_L, N @ S_U @ inv_diagonal(N0)
    return StokesSet(S_U, S_L, N0, N1, N, M0, M1, sign, _sector_branch(sign))


def _unipotent(upper: np.ndarray, lower: np.ndarray) -> tuple[CMat, CMat]:
    k = upper.size
    S_U = identity(k + 1)
    S_U[:k, k] = upper
    S_L = identity(k + 1)
    S_L[k, :k] = lower
    return S_U, S_L


def stokes_confluent(
    p: HGParams, rho: Optional[complex] = None, sign: str = "+", check: bool = True
) -> StokesSet:
    """Stokes matrices ``S~_U``, ``S~_L`` of the confluent family at finite rho.

    Args:
        p: Hypergeometric data
        rho: Overrides ``p.rho`` when given
        sign: ``"+"`` (Floquet side, principal ``arg rho``) or ``"-"``
            (co-Floquet side, ``arg rho`` in (0, 2*pi])
        check: Validate against the parameter sector first

    Raises:
        SectorError: If rho is outside P+ resp. P-
        ResonanceError: On resonant parameters
        PoleError: If a Gamma argument hits a pole
    """
    p = _at(p, rho)
    if check:
        ensure_valid(p, ParameterSector(sign))
    r = p.finite_rho()
    branch = _sector_branch(sign)
    log_r = branch.log(r)
    log_e = multipliers(p).log_e
    cd = connection_data(p)
    k = p.n - 1
    c = np.array([1 - b - p.gamma for b in p.beta_head], dtype=np.complex128)
    up_log = cd.log_xi + c * log_r
    low_log = cd.log_eta - c * log_r
    # e - 1 = -(1 - e); 1 - 1/e = 1 - exp(-log e)
    if sign == "+":
        upper = np.exp(up_log + _log_one_minus_exp(-log_e[:k]))
        lower = -np.exp(low_log + _log_one_minus_exp(log_e[k]))
    else:
        upper = -np.exp(up_log + _log_one_minus_exp(log_e[k]) - log_e[:k])
        lower = -np.exp(low_log + _log_one_minus_exp(log_e[:k]))
    S_U, S_L = _unipotent(upper, lower)
    return _assemble(p, S_U, S_L, sign)


def _log_limit_upper(p: HGParams, j: int) -> complex:
    head = p.beta_head
    numer = [(f"beta_{j + 1}-beta_{i + 1}", head[j] - b) for i, b in _others(head, j)]
    denom = [
        (f"beta_{j + 1}-alpha_{i + 1}", head[j] - a) for i, a in enumerate(p.alpha)
    ]
    return 1j * math.pi * (p.gamma + head[j] + p.n) + log_gamma_quotient(numer, denom)


def _log_limit_lower(p: HGParams, j: int) -> complex:
    head = p.beta_head
    numer = [
        (f"1-beta_{j + 1}+beta_{i + 1}", 1 - head[j] + b) for i, b in _others(head, j)
    ]
    denom = [
        (f"1-beta_{j + 1}+alpha_{i + 1}", 1 - head[j] + a)
        for i, a in enumerate(p.alpha)
    ]
    return log_gamma_quotient(numer, denom)


def stokes_limit(p: HGParams) -> tuple[CMat, CMat]:
    """``(S~_U(oo), S~_L(oo))`` of the limit system; identical for both signs."""
    k = p.n - 1
    upper = np.array(
        [-_TWO_PI_I * np.exp(_log_limit_upper(p, j)) for j in range(k)],
        dtype=np.complex128,
    )
    lower = np.array(
        [-_TWO_PI_I * np.exp(_log_limit_lower(p, j)) for j in range(k)],
        dtype=np.complex128,
    )
    return _unipotent(upper, lower)


def stokes_multipliers_gamma_form(
    p: HGParams, rho: Optional[complex] = None, sign: str = "+"
) -> tuple[np.ndarray, np.ndarray]:
    """Stokes multipliers as limit value times a Gamma ratio tending to 1.

    Returns:
        ``(upper, lower)``: ``s~_jn(rho)`` and ``s~_nj(rho)`` for ``j < n``
    """
    p = _at(p, rho)
    r = p.finite_rho()
    S_U, S_L = stokes_limit(p)
    k = p.n - 1
    g = p.gamma
    upper = np.empty(k, dtype=np.complex128)
    lower = np.empty(k, dtype=np.complex128)
    for j, b in enumerate(p.beta_head):
        if sign == "+":
            up = gamma_ratio(2 - b, 1 + g, r)
            low = gamma_ratio(1 + g, 2 - b, r)
        else:
            neg = -r
            up = gamma_ratio(-g, b - 1, neg)
            low = gamma_ratio(b - 1, -g, neg)
        upper[j] = S_U[j, k] * up
        lower[j] = S_L[k, j] * low
    return upper, lower


def conjugation_route(
    p: HGParams,
    rho: Optional[complex] = None,
    sign: str = "+",
    S_inf: Optional[tuple[CMat, CMat]] = None,
) -> StokesSet:
    """Finite-rho Stokes matrices by diagonal conjugation of the limit ones.

    Sign ``+``: ``rho^D Gamma(D+rho+1)^-1 S Gamma(D+rho+1) rho^-D``;
    sign ``-``: ``r^D Gamma(-D-rho) S Gamma(-D-rho)^-1 r^-D`` with
    ``r = exp(-i pi) rho``, where ``D = At_D`` is diagonal.
    """
    p = _at(p, rho)
    r = p.finite_rho()
    S_U, S_L = stokes_limit(p) if S_inf is None else S_inf
    d = p.diagonal
    n = p.n
    if sign == "+":
        conj = [
            [gamma_ratio(d[k] + 1, d[l] + 1, r) for l in range(n)] for k in range(n)
        ]
    else:
        neg = -r
        conj = [[gamma_ratio(-d[l], -d[k], neg) for l in range(n)] for k in range(n)]
    W = np.asarray(conj, dtype=np.complex128)
    return _assemble(p, np.asarray(S_U) * W, np.asarray(S_L) * W, sign)


def limit_monodromy(p: HGParams) -> CMat:
    """``exp(2 pi i At_D) S~_U(oo) S~_L(oo)``, the loop of the limit system around 0."""
    S_U, S_L = stokes_limit(p)
    E = np.diag(np.exp(_TWO_PI_I * np.asarray(p.diagonal, dtype=np.complex128)))
    return E @ S_U @ S_L


def frame_conjugate(p: HGParams, X: CMat) -> CMat:
    """``R X R^-1``: tilde-frame matrix to the original frame."""
    fr = frame(p)
    return fr.R @ np.asarray(X, dtype=np.complex128) @ fr.R_inv


def tilde_conjugate(p: HGParams, rho: complex, X: CMat, branch: Branch) -> CMat:
    """``rho^At_D X rho^-At_D``."""
    D = diag_power(p.diagonal, rho, branch)
    return D @ np.asarray(X, dtype=np.complex128) @ inv_diagonal(D)


def floquet_determinant(
    p: HGParams,
    s: complex,
    sign: str = "+",
    rho: Optional[complex] = None,
    branch: Branch = PRINCIPAL,
) -> complex:
    """Closed-form ``det V+(s)`` (sign ``+``) or normalized ``det V-(s)`` (sign ``-``).

    ``det Gamma(At_D + rho + 1) / det Gamma(A + rho + 1)`` resp.
    ``det Gamma(-A - rho) / det Gamma(-At_D - rho)``, times
    ``s^(sum(1 - beta_j + rho)) (s - 1)^(gamma + rho)``.
    """
    p = _at(p, rho)
    r, g = p.finite_rho(), p.gamma
    if sign == "+":
        numer = [("1+gamma+rho", 1 + g + r)] + [
            (f"2-beta_{j + 1}+rho", 2 - b + r) for j, b in enumerate(p.beta_head)
        ]
        denom = [(f"1-alpha_{i + 1}+rho", 1 - a + r) for i, a in enumerate(p.alpha)]
    else:
        numer = [(f"alpha_{i + 1}-rho", a - r) for i, a in enumerate(p.alpha)]
        denom = [("-gamma-rho", -g - r)] + [
            (f"beta_{j + 1}-1-rho", b - 1 - r) for j, b in enumerate(p.beta_head)
        ]
    exp_zero = sum(1 - b + r for b in p.beta_head)
    log_det = (
        log_gamma_quotient(numer, denom)
        + exp_zero * branch.log(s)
        + (g + r) * UPPER_CUT.log(complex(s) - 1)
    )
    return complex(np.exp(log_det))


def connection_determinant(p: HGParams, rho: Optional[complex] = None) -> complex:
    """``det C~ = 1 - eta^T xi``."""
    cd = connection_data(p, rho)
    return complex(1.0 - cd.eta @ cd.xi)


def assembly_identity(p: HGParams, stokes: StokesSet) -> tuple[CMat, CMat]:
    """Loops predicted by the monodromies of the Okubo bases.

    ``exp(-2 pi i rho) rho^D m0 rho^-D`` and ``rho^D m1 rho^-D``.
    """
    r = p.finite_rho()
    m = monodromies(p)
    m0, m1 = (m.m0_plus, m.m1_plus) if stokes.sign == "+" else (m.m0_minus, m.m1_minus)
    M0 = np.exp(-_TWO_PI_I * r) * tilde_conjugate(p, r, m0, stokes.branch)
    M1 = tilde_conjugate(p, r, m1, stokes.branch)
    return M0, M1

