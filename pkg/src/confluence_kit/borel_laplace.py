"""Borel-Laplace summation for ``z^2 psi' = (B + z A) psi``.

The formal transformation ``T(z) = sum T_k z^k`` to block-diagonal form is
computed order by order. Its Borel transform ``U(s) = sum T_k s^k / k!``
solves a Fuchsian system with singular points ``lambda_i - lambda_j``; it
is seeded from the series near the origin, continued along a ray by
``path_transport`` and integrated against ``exp(-s/z)`` with composite
Gauss-Legendre panels.
"""

import math
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Optional, Union

import numpy as np
from scipy import linalg, special

from .branches import CutBranch
from .constants import (
    BOREL_ANGLE_CLEARANCE,
    BOREL_CLEARANCE,
    BOREL_SERIES_ORDER,
    CONFLUENT_SPAN,
    DEFAULT_QUAD_TOL,
    DEFAULT_RK_TOL,
    FORMAL_MAX_ORDER,
    HALF_PLANE_MARGIN,
    LAPLACE_MAX_Z,
    QUAD_NODES,
    RESONANCE_TOL,
    SERIES_RADIUS,
    TAIL_FACTOR,
    TWO_PI,
)
from .cplx_core import CMat, eig, identity, lu_solve, norm_inf
from .debug import print_debug
from .exceptions import (
    ConfigError,
    ConvergenceError,
    PathError,
    ResonanceError,
    SectorError,
)
from .hg_model import (
    HGParams,
    ParameterSector,
    b_matrix,
    build_companion,
    ensure_valid,
    frame,
)
from .path_transport import DEFAULT_METHOD, PathSpec, check_tol, solve_segment
from .systems import BlockPartition, BorelColumnSystem, ConfluentFamily


@dataclass(frozen=True)
class FormalTransform:
    """Coefficients of the block-diagonalizing series, stored as ``U_k = T_k / k!``."""

    K: int
    U: np.ndarray
    A: CMat
    B: CMat
    partition: BlockPartition

    @property
    def n(self) -> int:
        return int(self.A.shape[0])

    @property
    def A_D(self) -> CMat:
        return self.partition.diagonal_part(self.A)

    def coefficient(self, k: int) -> CMat:
        """``T_k``; overflows to inf beyond ``k = 170``."""
        return self.U[k] * special.factorial(k, exact=False)

    def residuals(self) -> np.ndarray:
        """Coefficient residuals of ``z^2 T' - (B + zA) T + T (B + z A_D)``.

        Entry ``k - 1`` is the largest entry of the order-``k`` coefficient
        divided by ``(k-1)!``, for ``k = 1..K``; the diagonal blocks of
        order ``K + 1`` are included in the last entry.
        """
        A, B, A_D, U = self.A, self.B, self.A_D, self.U
        out = []
        for k in range(1, self.K + 1):
            prev = U[k - 1]
            r = (k - 1) * prev - k * (B @ U[k] - U[k] @ B) - A @ prev + prev @ A_D
            out.append(float(np.max(np.abs(r))))
        last = self.K * U[self.K] - A @ U[self.K] + U[self.K] @ A_D
        diag_last = self.partition.diagonal_part(last)
        if out:
            out[-1] = max(out[-1], float(np.max(np.abs(diag_last))))
        return np.asarray(out)


def _check_block_resonance(A_jj: CMat, K: int, block: int) -> None:
    mu = eig(A_jj)
    for a in range(mu.size):
        for b in range(mu.size):
            d = mu[a] - mu[b]
            k = round(d.real)
            if 1 <= k <= K and abs(d - k) < RESONANCE_TOL:
                raise ResonanceError(
                    f"Eigenvalues {mu[a]:.6g} and {mu[b]:.6g} of diagonal block "
                    f"{block} differ by the integer {k}"
                )


def formal_coeffs(A: Any, B: Any, K: int, debug: bool = False) -> FormalTransform:
    """Formal transformation of ``z^2 psi' = (B + zA) psi`` to block-diagonal form.

    Off-diagonal blocks of order ``k`` come from
    ``[B, T_k] = (k-1) T_{k-1} - A T_{k-1} + T_{k-1} A_D``, diagonal blocks
    from ``k X - [A_jj, X] = sum_{i != j} A_ji (T_k)_ij``. ``T_0 = I``.

    Args:
        A: Square matrix
        B: Diagonal matrix
        K: Truncation order, at most 200
        debug: Print the coefficient growth

    Raises:
        ConfigError: If K is out of range
        ResonanceError: If eigenvalues of a diagonal block of A differ by
            an integer in 1..K
    """
    if not 0 <= K <= FORMAL_MAX_ORDER:
        raise ConfigError(f"K must lie in [0, {FORMAL_MAX_ORDER}], got {K}")
    system = ConfluentFamily(A, B, None, debug=debug)
    A, B = system.A, system.B
    part = system.partition
    n = system.n
    blocks = [(idx, [i for i in range(n) if i not in idx]) for idx in part.indices]
    for j, (idx, _) in enumerate(blocks):
        _check_block_resonance(A[np.ix_(idx, idx)], K, j)

    lam = np.diag(B)
    gap = lam[:, None] - lam[None, :]
    off = np.abs(gap) > RESONANCE_TOL
    A_D = part.diagonal_part(A)
    U = np.zeros((K + 1, n, n), dtype=np.complex128)
    U[0] = identity(n)
    for k in range(1, K + 1):
        prev = U[k - 1]
        rhs = ((k - 1) * prev - A @ prev + prev @ A_D) / k
        cur = np.zeros((n, n), dtype=np.complex128)
        cur[off] = rhs[off] / gap[off]
        for idx, others in blocks:
            A_jj = A[np.ix_(idx, idx)]
            feed = A[np.ix_(idx, others)] @ cur[np.ix_(others, idx)]
            shift = k * np.eye(len(idx)) - A_jj
            cur[np.ix_(idx, idx)] = linalg.solve_sylvester(shift, A_jj, feed)
        U[k] = cur
    system._print_debug(
        f"formal_coeffs K={K} ||U_K||={norm_inf(U[K]):.3e} blocks={len(part)}"
    )
    return FormalTransform(K, U, A, B, part)


@dataclass(frozen=True)
class BorelSeries:
    transform: FormalTransform

    def radius(self, j: int) -> float:
        """Distance from 0 to the nearest singular point of block column ``j``."""
        lams = self.transform.partition.eigenvalues
        gaps = [abs(l - lams[j]) for i, l in enumerate(lams) if i != j]
        return min(gaps) if gaps else math.inf

    def seed_radius(self, j: int) -> float:
        r = self.radius(j)
        return 0.5 * r if math.isfinite(r) else 1.0

    def coefficients(self, j: int) -> np.ndarray:
        idx = self.transform.partition.indices[j]
        return self.transform.U[:, :, idx]

    def evaluate(self, j: int, s: Union[complex, np.ndarray]) -> np.ndarray:
        """``U_{.j}(s)``; a vector of points gives shape ``(m, n, n_j)``.

        Raises:
            ConvergenceError: Beyond 0.9 times the convergence radius
        """
        pts = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        if pts.size and np.max(np.abs(pts)) > SERIES_RADIUS * self.radius(j):
            raise ConvergenceError(
                f"Borel series of column {j} evaluated at |s| = "
                f"{np.max(np.abs(pts)):.3g} beyond {SERIES_RADIUS} x radius"
            )
        C = self.coefficients(j)
        powers = pts[:, None] ** np.arange(C.shape[0])[None, :]
        out = np.einsum("mk,kab->mab", powers, C)
        return out if np.ndim(s) else out[0]


def _wrap(angle: float) -> float:
    """Angle in (-pi, pi]."""
    a = math.fmod(angle + math.pi, TWO_PI)
    if a <= 0:
        a += TWO_PI
    return a - math.pi


@dataclass(frozen=True)
class DirectionClass:
    """Non-singular direction ``alpha`` and the singular directions around it."""

    alpha: float
    singular_args: tuple[float, ...]

    @classmethod
    def of(cls, eigenvalues: Sequence[complex], alpha: float) -> "DirectionClass":
        """Direction class of ``alpha``.

        Raises:
            PathError: If alpha is within the angular clearance of a
                singular direction
        """
        args = sorted(
            {
                round(_wrap(math.atan2((a - b).imag, (a - b).real)), 12)
                for i, a in enumerate(eigenvalues)
                for j, b in enumerate(eigenvalues)
                if i != j
            }
        )
        dc = cls(float(alpha), tuple(args))
        gap = dc.clearance(alpha)
        if gap < BOREL_ANGLE_CLEARANCE:
            raise PathError(
                f"Direction {alpha:.6g} is {gap:.3g} rad from a singular direction "
                f"(clearance {BOREL_ANGLE_CLEARANCE})"
            )
        return dc

    def clearance(self, angle: float) -> float:
        if not self.singular_args:
            return math.pi
        return min(abs(_wrap(angle - a)) for a in self.singular_args)

    def contains(self, angle: float) -> bool:
        """True if no singular ray lies between ``alpha`` and ``angle``."""
        delta = _wrap(angle - self.alpha)
        if abs(delta) >= math.pi:
            return False
        for a in self.singular_args:
            rel = _wrap(a - self.alpha)
            if min(0.0, delta) <= rel <= max(0.0, delta):
                return False
        return True


@dataclass(frozen=True)
class BorelRay:
    """Values of ``U_{.j}`` on ``[0, length] * exp(i direction)``.

    The series is used up to ``seed_radius``, the dense ODE solution beyond.
    """

    column: int
    direction: float
    seed_radius: float
    length: float
    series: BorelSeries
    dense: Any
    steps: int

    def values(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if t.size and t.max() > self.length * (1 + 1e-12):
            raise PathError(
                f"Borel ray of column {self.column} ends at {self.length:.6g}, "
                f"asked for {t.max():.6g}"
            )
        n = self.series.transform.n
        width = len(self.series.transform.partition.indices[self.column])
        out = np.empty((t.size, n, width), dtype=np.complex128)
        e = np.exp(1j * self.direction)
        near = t <= self.seed_radius
        if near.any():
            out[near] = self.series.evaluate(self.column, t[near] * e)
        if (~near).any():
            span = self.length - self.seed_radius
            y = self.dense((t[~near] - self.seed_radius) / span)
            out[~near] = np.moveaxis(y.reshape(n, width, -1), -1, 0)
        return out


def continue_U(
    bs: BorelSeries,
    column: int,
    direction: float,
    upto: float,
    tol: float = DEFAULT_RK_TOL,
    method: str = DEFAULT_METHOD,
    debug: bool = False,
) -> BorelRay:
    """Continue block column ``column`` of ``U`` along ``exp(i direction) R+``.

    Args:
        bs: Borel series of the formal transformation
        column: Block column index
        direction: Ray argument, non-singular
        upto: Ray length
        tol: Runge-Kutta tolerance
        method: solve_ivp method
        debug: Print the continuation summary

    Raises:
        PathError: If the ray is too close to a singular direction or the
            integration breaks down
    """
    check_tol(tol)
    ft = bs.transform
    DirectionClass.of(ft.partition.eigenvalues, direction)
    system = BorelColumnSystem(ft.A, ft.B, column, debug=debug)
    r0 = bs.seed_radius(column)
    if upto <= r0:
        return BorelRay(column, direction, r0, r0, bs, None, 0)
    e = np.exp(1j * direction)
    gap = bs.radius(column)
    clearance = BOREL_CLEARANCE * gap if math.isfinite(gap) else 0.0
    path = PathSpec.line(r0 * e, upto * e, clearance, label=f"borel[{column}]")
    path.check_clearance(system.singular_points)
    seed = bs.evaluate(column, r0 * e)
    out = solve_segment(system, path.segments[0], seed, tol, method, dense_output=True)
    system._print_debug(
        f"borel ray column {column} direction {direction:.6g} "
        f"length {upto:.6g} steps={out.steps}"
    )
    return BorelRay(column, direction, r0, float(upto), bs, out.dense, out.steps)


@dataclass(frozen=True)
class LaplaceSum:
    T: CMat
    Psi: CMat
    err_est: float
    panels: int
    length: float


class CanonicalSolution:
    """Sectorial solution ``Psi_[alpha] = T_[alpha] z^{A_jj} exp(-lambda_j / z)``.

    ``log z`` takes its argument in ``(alpha - pi, alpha + pi]``. Borel rays
    are continued on demand and cached per block column.
    """

    def __init__(
        self,
        series: BorelSeries,
        direction: float,
        tol: float = DEFAULT_RK_TOL,
        quad_tol: float = DEFAULT_QUAD_TOL,
        method: str = DEFAULT_METHOD,
        debug: bool = False,
    ):
        check_tol(tol)
        check_tol(quad_tol)
        self.series = series
        self.direction = DirectionClass.of(
            series.transform.partition.eigenvalues, direction
        )
        self.branch = CutBranch.centered(direction)
        self.tol = tol
        self.quad_tol = quad_tol
        self.method = method
        self._debug = debug
        self._rays: dict[int, BorelRay] = {}
        self._lock = threading.Lock()

    @property
    def alpha(self) -> float:
        return self.direction.alpha

    @property
    def tail_factor(self) -> float:
        return max(TAIL_FACTOR, -math.log(0.1 * self.quad_tol))

    def half_plane_cos(self, z: complex) -> float:
        z = complex(z)
        return float((np.exp(-1j * self.alpha) * z).real / abs(z))

    def ray(self, column: int, length: float) -> BorelRay:
        with self._lock:
            cached = self._rays.get(column)
            if cached is None or cached.length < length:
                grow = 1.5 * cached.length if cached is not None else 0.0
                cached = continue_U(
                    self.series,
                    column,
                    self.alpha,
                    max(length, grow),
                    self.tol,
                    self.method,
                    self._debug,
                )
                self._rays[column] = cached
            return cached

    def transform(self, z: complex) -> LaplaceSum:
        return laplace_sum(self, z)

    def psi(self, z: complex) -> CMat:
        return laplace_sum(self, z).Psi

    def residual(self, z: complex, rel_step: float = 1e-3) -> float:
        """Column-wise relative residual of ``z^2 Psi' - (B + zA) Psi``.

        ``Psi'`` comes from a five-point stencil along the ray through ``z``.
        """
        z = complex(z)
        h = rel_step * z
        ft = self.series.transform
        vals = [self.psi(z + k * h) for k in (-2, -1, 1, 2)]
        d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
        rhs = (ft.B + z * ft.A) @ self.psi(z)
        res = np.abs(z**2 * d - rhs).max(axis=0) / np.abs(rhs).max(axis=0)
        return float(res.max())

    def _print_debug(self, message: str) -> None:
        print_debug(self._debug, message)


def _panels(length: float, width: float) -> tuple[np.ndarray, np.ndarray, int]:
    """Gauss-Legendre nodes and weights of ``[0, length]`` cut into equal panels."""
    m = max(1, math.ceil(length / width))
    x, w = np.polynomial.legendre.leggauss(QUAD_NODES)
    edges = np.linspace(0.0, length, m + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return t, weights, m


def _block_power(A_jj: CMat, log_z: complex) -> CMat:
    return np.asarray(linalg.expm(A_jj * log_z), dtype=np.complex128)


def laplace_sum(cs: CanonicalSolution, z: complex) -> LaplaceSum:
    """Laplace integral ``T_[alpha](z)`` of the Borel transform along the ray.

    ``T_[alpha](z) = (1/z) int_0^{oo e^{i alpha}} U(s) exp(-s/z) ds``.

    The ray is cut at ``L = f |z| / cos`` with ``f = max(36, log(10 / quad_tol))``
    and ``cos`` the cosine between ``z`` and the ray; panels have length
    ``min(1, |z|)`` and 32 nodes.

    Raises:
        ConfigError: If ``z = 0`` or ``|z| > 2``
        PathError: If z is outside the half-plane bisected by the ray
    """
    z = complex(z)
    if z == 0 or abs(z) > LAPLACE_MAX_Z:
        raise ConfigError(f"Laplace sums need 0 < |z| <= {LAPLACE_MAX_Z}, got {z}")
    c = cs.half_plane_cos(z)
    if c < HALF_PLANE_MARGIN:
        raise PathError(
            f"z = {z:.6g} lies outside the Laplace half-plane of direction "
            f"{cs.alpha:.6g} (cos = {c:.3g})",
            location=z,
        )
    ft = cs.series.transform
    factor = cs.tail_factor
    L = factor * abs(z) / c
    t, weights, m = _panels(L, min(1.0, abs(z)))
    e = np.exp(1j * cs.alpha)
    kernel = weights * np.exp(-t * e / z) * e / z
    log_z = cs.branch.log(z)
    n = ft.n
    T = np.zeros((n, n), dtype=np.complex128)
    Psi = np.zeros((n, n), dtype=np.complex128)
    err = 0.0
    for j, idx in enumerate(ft.partition.indices):
        ray = cs.ray(j, L)
        U = ray.values(t)
        col = np.tensordot(kernel, U, axes=(0, 0))
        T[:, idx] = col
        A_jj = ft.A[np.ix_(idx, idx)]
        lam = ft.partition.eigenvalues[j]
        Psi[:, idx] = col @ _block_power(A_jj, log_z) * np.exp(-lam / z)
        err = max(err, norm_inf(U[-1]) * math.exp(-factor) / c)
    cs._print_debug(
        f"laplace direction {cs.alpha:.6g} z={z:.6g} panels={m} "
        f"length={L:.4g} tail={err:.2e}"
    )
    return LaplaceSum(T, Psi, err, m, L)


@dataclass(frozen=True)
class StokesEstimate:
    S: CMat
    spread: float


def stokes_from_laplace(
    cs1: CanonicalSolution, cs2: CanonicalSolution, z_samples: Sequence[complex]
) -> StokesEstimate:
    """``S = Psi_[alpha1]^-1 Psi_[alpha2]`` averaged over ``z_samples``.

    ``spread`` is the largest entrywise difference between two samples.

    Raises:
        PathError: If a sample lies outside either half-plane
    """
    if len(z_samples) == 0:
        raise ConfigError("stokes_from_laplace needs at least one z sample")
    estimates = []
    for z in z_samples:
        for cs in (cs1, cs2):
            if cs.half_plane_cos(z) < HALF_PLANE_MARGIN:
                raise PathError(
                    f"Sectors of {cs1.alpha:.6g} and {cs2.alpha:.6g} do not "
                    f"overlap at z = {complex(z):.6g}",
                    location=complex(z),
                )
        estimates.append(lu_solve(cs1.psi(z), cs2.psi(z)))
    spread = max(
        (
            float(np.max(np.abs(a - b)))
            for i, a in enumerate(estimates)
            for b in estimates[i + 1 :]
        ),
        default=0.0,
    )
    return StokesEstimate(np.mean(estimates, axis=0), spread)


@dataclass(frozen=True)
class LaplaceStokes:
    S_U: CMat
    S_L: CMat
    spread: float


_LOWER_SAMPLES = (0.5, 0.5 * np.exp(0.2j), 0.5 * np.exp(-0.2j))


def tilde_transform(p: HGParams, K: int = BOREL_SERIES_ORDER) -> FormalTransform:
    """Formal transformation of the limit system in the tilde frame.

    There the block-diagonal part ``At_D`` of the system matrix is diagonal.
    """
    fr = frame(p)
    A_t = fr.R_inv @ build_companion(p) @ fr.R
    return formal_coeffs(A_t, b_matrix(p.n), K)


def laplace_stokes_limit(
    p: HGParams,
    tol: float = DEFAULT_RK_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
    debug: bool = False,
) -> LaplaceStokes:
    """``S~_U(oo)`` and ``S~_L(oo)`` from canonical solutions of the limit system.

    ``S_L = Psi_{pi/4}^-1 Psi_{-pi/4}`` near ``z = 1/2`` and
    ``S_U = Psi_{5pi/4}^-1 Psi_{3pi/4}`` near ``z = -1/2``.
    """
    bs = BorelSeries(tilde_transform(p))
    quarter = math.pi / 4

    def solution(alpha: float) -> CanonicalSolution:
        return CanonicalSolution(bs, alpha, tol, quad_tol, debug=debug)

    lower = stokes_from_laplace(solution(quarter), solution(-quarter), _LOWER_SAMPLES)
    upper = stokes_from_laplace(
        solution(5 * quarter), solution(3 * quarter), [-z for z in _LOWER_SAMPLES]
    )
    return LaplaceStokes(upper.S, lower.S, max(upper.spread, lower.spread))


def confluent_transform(
    ft: FormalTransform,
    p: Optional[HGParams],
    z: complex,
    rho: complex,
    sign: str,
    direction: float,
    tol: float = DEFAULT_RK_TOL,
    debug: bool = False,
) -> CMat:
    """Block-diagonalizing transformation ``T^sign_[alpha](z, rho)`` at finite rho.

    With ``w = rho z - lambda_j`` the integration path is the straight
    segment from 0 towards ``w`` (sign ``+``) or the ray away from it
    (sign ``-``), parameterized by ``sigma = w (1 - exp(-u))`` resp.
    ``sigma = w (1 - exp(u))``, ``u >= 0``.

    Args:
        ft: Formal transformation of the limit system
        p: Parameters used to validate rho, or None to skip
        z: Evaluation point
        rho: Finite confluence parameter
        sign: ``"+"`` or ``"-"``
        direction: Representative of the direction class of the limit
        tol: Runge-Kutta tolerance of the Borel continuation
        debug: Print the ray summaries

    Raises:
        SectorError: If ``Re(rho + eig A_jj)`` has the wrong sign
        PathError: If an integration ray leaves the direction class
    """
    if sign not in ("+", "-"):
        raise ConfigError(f"Sign must be '+' or '-', got {sign!r}")
    z, rho = complex(z), complex(rho)
    if p is not None:
        ensure_valid(p.with_rho(rho), ParameterSector(sign))
    bs = BorelSeries(ft)
    part = ft.partition
    dc = DirectionClass.of(part.eigenvalues, direction)
    T = np.zeros((ft.n, ft.n), dtype=np.complex128)
    for j, idx in enumerate(part.indices):
        A_jj = ft.A[np.ix_(idx, idx)]
        shifted = A_jj + rho * np.eye(len(idx))
        rates = eig(shifted).real
        if (sign == "+" and rates.min() <= 0) or (sign == "-" and rates.max() >= 0):
            side = "positive" if sign == "+" else "negative"
            raise SectorError(
                f"Re(rho + eig A_jj) must be {side} for sign {sign}, "
                f"got {rates.tolist()}"
            )
        rate = float(np.min(np.abs(rates)))
        u_max = CONFLUENT_SPAN / rate
        u, weights, _ = _panels(u_max, 1.0 / rate)
        w = rho * z - part.eigenvalues[j]
        if sign == "+":
            sigma = w * -np.expm1(-u)
            ray_arg = math.atan2(w.imag, w.real)
            kern = -u
            orient = 1.0
        else:
            sigma = w * -np.expm1(u)
            ray_arg = math.atan2(-w.imag, -w.real)
            kern = u
            orient = -1.0
        if not dc.contains(ray_arg):
            raise PathError(
                f"Integration ray {ray_arg:.6g} of column {j} leaves the direction "
                f"class of {direction:.6g}",
                location=w,
            )
        ray = continue_U(bs, j, ray_arg, float(np.abs(sigma).max()), tol, debug=debug)
        U = ray.values(np.abs(sigma))
        E = np.array([linalg.expm(k * shifted) for k in kern])
        T[:, idx] = orient * np.einsum("m,mab,mbc->ac", weights, U, E) @ shifted
    return T


@dataclass(frozen=True)
class GevreyFit:
    C: float
    M: float
    r2: float


def gevrey_fit(ft: FormalTransform, k_min: Optional[int] = None) -> GevreyFit:
    """Least-squares fit ``||T_k|| / k! ~ C M^k`` over ``k >= k_min``.

    Defaults to the upper half of the available orders.
    """
    k_min = ft.K // 2 if k_min is None else k_min
    k = np.arange(k_min, ft.K + 1)
    norms = np.array([norm_inf(ft.U[i]) for i in k])
    keep = norms > 0
    if keep.sum() < 2:
        raise ConvergenceError("Gevrey fit needs two non-zero coefficients")
    x, y = k[keep].astype(float), np.log(norms[keep])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return GevreyFit(float(np.exp(intercept)), float(np.exp(slope)), r2)
