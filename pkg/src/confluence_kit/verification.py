"""Identity checks comparing independent routes to the same quantities.

Every check returns a :class:`CheckReport` whose ``passed`` flag is
``deviation <= tolerance``. Deviations are entrywise maxima, relative
where the reference is at least 1e-8 in modulus and absolute below.
"""

import csv
import io
import math
import os
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union

import numpy as np

from .branches import PRINCIPAL, Branch
from .closed_form import (
    MonodromySet,
    co_floquet_normalizer,
    conjugation_route,
    connection_matrix,
    floquet_determinant,
    formal_monodromies,
    limit_monodromy,
    monodromies,
    multipliers,
    stokes_confluent,
    stokes_limit,
)
from .constants import (
    BASE_POINT,
    DEFAULT_RK_TOL,
    DEFAULT_SERIES_TOL,
    THREADS_ENV,
)
from .cplx_core import CMat, det, deviation, diag_power, eig, inv_diagonal
from .debug import print_debug
from .exceptions import ConfigError
from .hg_model import (
    HGParams,
    ParameterSector,
    build_confluent,
    build_okubo,
    ensure_valid,
    frame,
)
from .path_transport import (
    LoopSpec,
    PathSpec,
    continue_value,
    monodromy_numeric,
    transport,
)
from .regression import REGRESSION_SET, RegressionCase
from .series_solutions import assemble_floquet


@dataclass(frozen=True)
class CheckReport:
    name: str
    inputs: dict[str, Any]
    deviation: float
    tolerance: float
    runtime: float = 0.0
    details: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.deviation) and self.deviation <= self.tolerance)

    def to_json(self, include_runtime: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "inputs": self.inputs,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": dict(self.details),
        }
        if include_runtime:
            out["runtime"] = self.runtime
        return out


def _report(
    name: str,
    inputs: dict[str, Any],
    dev: float,
    tolerance: float,
    started: float,
    debug: bool,
    **details: float,
) -> CheckReport:
    report = CheckReport(
        name,
        inputs,
        float(dev),
        tolerance,
        time.perf_counter() - started,
        {k: float(v) for k, v in details.items()},
    )
    print_debug(
        debug,
        f"check {name}: deviation={report.deviation:.3e} tol={tolerance:.1e} "
        f"{'pass' if report.passed else 'FAIL'} ({report.runtime:.2f}s)",
    )
    return report


def _inputs(p: HGParams, **extra: Any) -> dict[str, Any]:
    out = p.to_json()
    for key, value in extra.items():
        if isinstance(value, complex):
            out[key] = [value.real, value.imag]
        else:
            out[key] = value
    return out


def _scalar_deviation(x: complex, y: complex) -> float:
    return deviation(np.array([x]), np.array([y]))


def _floquet_basis(
    p: HGParams, series_tol: float, branch: Branch = PRINCIPAL
) -> CMat:
    return assemble_floquet(p, BASE_POINT, series_tol, branch)


def check_gauss_kummer(
    p: HGParams,
    rho: Optional[complex] = None,
    s: complex = BASE_POINT,
    series_tol: float = DEFAULT_SERIES_TOL,
    tolerance: float = 1e-8,
    branch: Branch = PRINCIPAL,
    debug: bool = False,
) -> CheckReport:
    """Determinant identities for ``V+`` and the normalized ``V-``.

    Series determinants at ``s`` against the Gamma-product closed forms;
    ``branch`` fixes the powers of ``s`` on both sides.
    """
    started = time.perf_counter()
    p = p if rho is None else p.with_rho(rho)
    ensure_valid(p)
    fr = frame(p)
    Vt = assemble_floquet(p, s, series_tol, branch)
    det_plus = det(Vt) / det(fr.R)
    V_minus = Vt @ connection_matrix(p) @ co_floquet_normalizer(p) @ fr.R_inv
    det_minus = det(V_minus)
    closed_plus = floquet_determinant(p, s, "+", branch=branch)
    closed_minus = floquet_determinant(p, s, "-", branch=branch)
    dev_plus = _scalar_deviation(det_plus, closed_plus)
    dev_minus = _scalar_deviation(det_minus, closed_minus)
    return _report(
        "gauss_kummer",
        _inputs(p, s=complex(s)),
        max(dev_plus, dev_minus),
        tolerance,
        started,
        debug,
        plus=dev_plus,
        minus=dev_minus,
    )


def _route_to(s: complex) -> PathSpec:
    """From the base point to ``s``; points right of 1 are reached over the top."""
    s = complex(s)
    if s.real > 1:
        return PathSpec.polyline([BASE_POINT, 1 + 0.5j, s], label="upper-arc")
    return PathSpec.line(BASE_POINT, s, label="direct")


_HYPER_SAMPLES = {0: (0.3, 0.2 + 0.25j), 1: (1.4, 1.3 + 0.2j)}


def check_hyperfunction(
    p: HGParams,
    rho: Optional[complex] = None,
    samples: Optional[dict[int, Sequence[complex]]] = None,
    tol: float = DEFAULT_RK_TOL,
    series_tol: float = DEFAULT_SERIES_TOL,
    tolerance: float = 1e-6,
    debug: bool = False,
) -> CheckReport:
    """Jump of the co-Floquet columns around a singular point.

    With ``V- = V~+ C~ D_C`` (tilde frame) and ``s~`` the point ``s``
    continued once around ``lambda``, ``V-_j(s~) - V-_j(s) = (e_j - 1) V~+_j(s)``
    for the columns belonging to ``lambda`` (``j < n`` at 0, ``j = n`` at 1).
    ``samples`` maps the singular point (0 or 1) to its sample points.
    """
    started = time.perf_counter()
    p = p if rho is None else p.with_rho(rho)
    ensure_valid(p)
    system = build_okubo(p, debug=debug)
    Vt0 = _floquet_basis(p, series_tol)
    right = connection_matrix(p) @ co_floquet_normalizer(p)
    e = multipliers(p).e
    samples = _HYPER_SAMPLES if samples is None else samples
    worst = 0.0
    details: dict[str, float] = {}
    for center, points in samples.items():
        cols = list(range(p.n - 1)) if center == 0 else [p.n - 1]
        for s in points:
            Vt = continue_value(system, Vt0, _route_to(s), tol)
            V_minus = Vt @ right
            loop = LoopSpec(complex(s), complex(center)).to_path(system.singular_points)
            turned = transport(system, loop, tol).propagator @ V_minus
            jump = (turned - V_minus)[:, cols]
            expected = Vt[:, cols] * (e[cols] - 1)
            dev = deviation(jump, expected)
            details[f"s={complex(s):.4g}"] = dev
            worst = max(worst, dev)
    return _report(
        "hyperfunction", _inputs(p), worst, tolerance, started, debug, **details
    )


def numeric_monodromies(
    p: HGParams,
    tol: float = DEFAULT_RK_TOL,
    series_tol: float = DEFAULT_SERIES_TOL,
    debug: bool = False,
    branch: Branch = PRINCIPAL,
) -> MonodromySet:
    """Loops of ``V~+`` and ``V~- = V~+ C~ D_C`` around 0 and 1 by path transport.

    ``C`` is the closed-form connection ``C~ D_C`` (shifted to ``branch``);
    the four loops are numeric.
    """
    system = build_okubo(p, debug=debug)
    F_plus = _floquet_basis(p, series_tol, branch)
    C = monodromies(p, branch=branch).C
    F_minus = F_plus @ C
    around_zero = LoopSpec(BASE_POINT, 0j)
    around_one = LoopSpec(BASE_POINT, 1 + 0j)
    return MonodromySet(
        monodromy_numeric(system, F_plus, around_zero, tol),
        monodromy_numeric(system, F_plus, around_one, tol),
        monodromy_numeric(system, F_minus, around_zero, tol),
        monodromy_numeric(system, F_minus, around_one, tol),
        C,
    )


def _match_spectrum(found: np.ndarray, expected: Iterable[complex]) -> float:
    """Largest distance from an expected eigenvalue to its nearest unused match."""
    pool = list(np.asarray(found, dtype=np.complex128))
    worst = 0.0
    for z in expected:
        k = int(np.argmin([abs(w - z) for w in pool]))
        worst = max(worst, abs(pool.pop(k) - z))
    return worst


def check_monodromy(
    p: HGParams,
    rho: Optional[complex] = None,
    tol: float = DEFAULT_RK_TOL,
    series_tol: float = DEFAULT_SERIES_TOL,
    tolerance: float = 1e-6,
    debug: bool = False,
    branch: Branch = PRINCIPAL,
) -> CheckReport:
    """Numeric loops of ``V~+`` and ``V~- = V~+ C~ D_C`` against the closed forms.

    Also checks that the loop around 0 followed by the loop around 1 has
    spectrum ``exp(2 pi i (rho - alpha_i))``.
    """
    started = time.perf_counter()
    p = p if rho is None else p.with_rho(rho)
    ensure_valid(p)
    m = monodromies(p, branch=branch)
    num = numeric_monodromies(p, tol, series_tol, debug, branch)
    pairs = {
        "m0_plus": (num.m0_plus, m.m0_plus),
        "m1_plus": (num.m1_plus, m.m1_plus),
        "m0_minus": (num.m0_minus, m.m0_minus),
        "m1_minus": (num.m1_minus, m.m1_minus),
    }
    details = {name: deviation(num, ref) for name, (num, ref) in pairs.items()}
    total = pairs["m0_plus"][0] @ pairs["m1_plus"][0]
    r = p.finite_rho()
    expected = [np.exp(2j * math.pi * (r - a)) for a in p.alpha]
    details["total"] = _match_spectrum(eig(total), expected)
    return _report(
        "monodromy",
        _inputs(p),
        max(details.values()),
        tolerance,
        started,
        debug,
        **details,
    )


def _unipotent_defect(S: CMat, upper: bool) -> float:
    n = S.shape[0]
    mask = np.eye(n, dtype=np.complex128)
    target = mask.copy()
    if upper:
        target[: n - 1, n - 1] = S[: n - 1, n - 1]
    else:
        target[n - 1, : n - 1] = S[n - 1, : n - 1]
    return float(np.max(np.abs(S - target)))


def check_stokes_factorization(
    p: HGParams,
    rho: Optional[complex] = None,
    sign: str = "+",
    tol: float = DEFAULT_RK_TOL,
    series_tol: float = DEFAULT_SERIES_TOL,
    tolerance: float = 1e-6,
    debug: bool = False,
) -> CheckReport:
    """Stokes matrices extracted from numeric loops of the confluent family.

    ``Y~ = (rho z)^-rho V~(rho z) rho^-At_D`` is continued around ``z = 0`` and
    ``z = 1/rho`` from ``z0 = 1/(2 rho)``. Sign ``+`` uses ``V~+`` with
    ``S_U = N0^-1 M0`` and ``S_L = M1 N_1/rho^-1``; sign ``-`` uses
    ``V~- = V~+ C~ D_C`` with ``S_L = N0^-1 M0`` and ``S_U = N^-1 M1 N0``.
    """
    started = time.perf_counter()
    p = p if rho is None else p.with_rho(rho)
    ensure_valid(p, ParameterSector(sign))
    r = p.finite_rho()
    closed = stokes_confluent(p, sign=sign)
    G = _floquet_basis(p, series_tol)
    if sign == "-":
        G = G @ connection_matrix(p) @ co_floquet_normalizer(p)
    family = build_confluent(p, debug=debug)
    z0 = 1 / (2 * r)
    D = diag_power(p.diagonal, r, closed.branch)
    D_inv = inv_diagonal(D)

    def loop(around: complex) -> CMat:
        return D @ monodromy_numeric(family, G, LoopSpec(z0, around), tol) @ D_inv

    M0, M1 = loop(0j), loop(1 / r)
    N0, N1, N = formal_monodromies(p)
    if sign == "+":
        S_U, S_L = inv_diagonal(N0) @ M0, M1 @ inv_diagonal(N1)
    else:
        S_L, S_U = inv_diagonal(N0) @ M0, inv_diagonal(N) @ M1 @ N0
    routed = conjugation_route(p, sign=sign)
    details = {
        "S_U": deviation(S_U, closed.S_U),
        "S_L": deviation(S_L, closed.S_L),
        "shape_U": _unipotent_defect(S_U, upper=True),
        "shape_L": _unipotent_defect(S_L, upper=False),
        "route": max(
            deviation(routed.S_U, closed.S_U), deviation(routed.S_L, closed.S_L)
        ),
    }
    return _report(
        f"stokes_factorization{sign}",
        _inputs(p, sign=sign),
        max(details.values()),
        tolerance,
        started,
        debug,
        **details,
    )


def check_route_equivalence(
    p: HGParams,
    rho: Optional[complex] = None,
    sign: str = "+",
    tolerance: float = 1e-10,
    debug: bool = False,
) -> CheckReport:
    """``conjugation_route(stokes_limit)`` against ``stokes_confluent``."""
    started = time.perf_counter()
    p = p if rho is None else p.with_rho(rho)
    closed = stokes_confluent(p, sign=sign)
    routed = conjugation_route(p, sign=sign)
    dev = max(deviation(routed.S_U, closed.S_U), deviation(routed.S_L, closed.S_L))
    return _report(
        f"route_equivalence{sign}",
        _inputs(p, sign=sign),
        dev,
        tolerance,
        started,
        debug,
    )


def check_limit_monodromy(
    p: HGParams,
    tol: float = DEFAULT_RK_TOL,
    tolerance: float = 1e-6,
    debug: bool = False,
) -> CheckReport:
    """Loop of the limit system around 0 against ``exp(2 pi i At_D) S_U S_L``.

    Compares traces and the spectrum ``exp(-2 pi i alpha_i)``; both are
    invariant under the change of basis.
    """
    started = time.perf_counter()
    limit = build_confluent(p, rho=None, debug=debug)
    path = LoopSpec(BASE_POINT, 0j, radius=BASE_POINT).to_path(limit.singular_points)
    P = transport(limit, path, tol).propagator
    L = limit_monodromy(p)
    expected = [np.exp(-2j * math.pi * a) for a in p.alpha]
    details = {
        "trace": _scalar_deviation(np.trace(P), np.trace(L)),
        "spectrum": _match_spectrum(eig(P), expected),
        "closed_spectrum": _match_spectrum(eig(L), expected),
    }
    return _report(
        "limit_monodromy",
        _inputs(p.with_rho(None)),
        max(details.values()),
        tolerance,
        started,
        debug,
        **details,
    )


@dataclass(frozen=True)
class SweepRow:
    abs_rho: float
    arg_rho: float
    sign: str
    entry: tuple[int, int]
    deviation: float
    slope: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    slope: float
    norms: tuple[float, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["abs_rho", "arg_rho", "sign", "entry", "deviation", "slope"])
        for row in self.rows:
            writer.writerow(
                [
                    repr(row.abs_rho),
                    repr(row.arg_rho),
                    row.sign,
                    f"{row.entry[0]},{row.entry[1]}",
                    repr(row.deviation),
                    repr(row.slope),
                ]
            )
        return buf.getvalue()


def sweep_threads() -> int:
    """Worker count for sweeps: ``CONFLUENCE_KIT_THREADS`` or ``min(4, cpus)``."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(
            f"{THREADS_ENV} must be a positive integer, got {raw!r}"
        ) from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {value}")
    return value


def _slope(radii: Sequence[float], values: Sequence[float]) -> float:
    if len(radii) < 2 or min(values) <= 0:
        return float("nan")
    slope, _ = np.polyfit(np.log(radii), np.log(values), 1)
    return float(slope)


def confluence_sweep(
    p: HGParams,
    sign: str,
    ray_arg: Optional[float],
    radii: Sequence[float],
    threads: Optional[int] = None,
    debug: bool = False,
) -> SweepResult:
    """Distance of the finite-rho Stokes multipliers from their limits along a ray.

    Args:
        p: Hypergeometric data (its rho is ignored)
        sign: ``"+"`` or ``"-"``
        ray_arg: ``arg rho``; defaults to 0 for ``+`` and pi for ``-``
        radii: Values of ``|rho|``
        threads: Worker count, defaults to :func:`sweep_threads`
        debug: Print one line per radius

    Returns:
        Rows per radius and off-diagonal entry, with per-entry log-log
        slopes, and the slope of the entrywise max over all entries

    Raises:
        ConfigError: If radii is empty or not positive
        SectorError: If the ray lies outside the sector of ``sign``
    """
    radii = [float(r) for r in radii]
    if not radii or min(radii) <= 0:
        raise ConfigError("Sweep radii must be a non-empty list of positive numbers")
    if ray_arg is None:
        ray_arg = 0.0 if sign == "+" else math.pi
    S_U_inf, S_L_inf = stokes_limit(p)
    n = p.n
    entries = [(j, n - 1) for j in range(n - 1)] + [(n - 1, j) for j in range(n - 1)]

    def one(radius: float) -> list[float]:
        s = stokes_confluent(p, radius * np.exp(1j * ray_arg), sign)
        devs = []
        for i, j in entries:
            if i < j:
                devs.append(abs(s.S_U[i, j] - S_U_inf[i, j]))
            else:
                devs.append(abs(s.S_L[i, j] - S_L_inf[i, j]))
        print_debug(debug, f"sweep |rho|={radius:.6g} max={max(devs):.3e}")
        return devs

    workers = threads if threads is not None else sweep_threads()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        table = list(pool.map(one, radii))
    norms = tuple(max(row) for row in table)
    slopes = [_slope(radii, [row[k] for row in table]) for k in range(len(entries))]
    rows = tuple(
        SweepRow(radius, float(ray_arg), sign, (i + 1, j + 1), devs[k], slopes[k])
        for radius, devs in zip(radii, table)
        for k, (i, j) in enumerate(entries)
    )
    return SweepResult(rows, _slope(radii, list(norms)), norms)


CheckFn = Callable[[RegressionCase, float, float, bool, Branch], list[CheckReport]]


def _gauss_kummer(
    case: RegressionCase, tol: float, series_tol: float, debug: bool, branch: Branch
):
    return [
        check_gauss_kummer(
            case.params, series_tol=series_tol, branch=branch, debug=debug
        )
    ]


def _hyperfunction(
    case: RegressionCase, tol: float, series_tol: float, debug: bool, branch: Branch
):
    return [
        check_hyperfunction(case.params, tol=tol, series_tol=series_tol, debug=debug)
    ]


def _monodromy(
    case: RegressionCase, tol: float, series_tol: float, debug: bool, branch: Branch
):
    return [
        check_monodromy(
            case.params, tol=tol, series_tol=series_tol, debug=debug, branch=branch
        )
    ]


def _stokes(
    case: RegressionCase, tol: float, series_tol: float, debug: bool, branch: Branch
):
    return [
        check_stokes_factorization(
            case.params, sign="+", tol=tol, series_tol=series_tol, debug=debug
        ),
        check_stokes_factorization(
            case.minus_params, sign="-", tol=tol, series_tol=series_tol, debug=debug
        ),
    ]


def _routes(
    case: RegressionCase, tol: float, series_tol: float, debug: bool, branch: Branch
):
    return [
        check_route_equivalence(case.params, sign="+", debug=debug),
        check_route_equivalence(case.minus_params, sign="-", debug=debug),
    ]


def _limit(
    case: RegressionCase, tol: float, series_tol: float, debug: bool, branch: Branch
):
    return [check_limit_monodromy(case.params, tol=tol, debug=debug)]


CHECKS: dict[str, CheckFn] = {
    "gauss_kummer": _gauss_kummer,
    "hyperfunction": _hyperfunction,
    "monodromy": _monodromy,
    "stokes_factorization": _stokes,
    "route_equivalence": _routes,
    "limit_monodromy": _limit,
}


def run_regression(
    checks: Optional[Sequence[str]] = None,
    cases: Optional[Sequence[Union[str, RegressionCase]]] = None,
    tol: float = DEFAULT_RK_TOL,
    series_tol: float = DEFAULT_SERIES_TOL,
    debug: bool = False,
    branch: Branch = PRINCIPAL,
) -> list[CheckReport]:
    """Run the named checks (default: all) over the frozen parameter set.

    ``cases`` mixes names from the frozen set with ad-hoc cases. ``branch``
    fixes ``s**(1 - beta_j + rho)`` in the Gauss-Kummer and monodromy checks;
    the others work with branch-free quantities or their own sector branch.

    Raises:
        ConfigError: On an unknown check or case name
    """
    names = list(CHECKS) if checks is None else list(checks)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise ConfigError(f"Unknown checks: {unknown}. Known: {sorted(CHECKS)}")
    selected = list(REGRESSION_SET) if cases is None else list(cases)
    missing = [
        c for c in selected if isinstance(c, str) and c not in REGRESSION_SET
    ]
    if missing:
        raise ConfigError(
            f"Unknown regression cases: {missing}. Known: {sorted(REGRESSION_SET)}"
        )
    reports: list[CheckReport] = []
    for item in selected:
        case = REGRESSION_SET[item] if isinstance(item, str) else item
        for check in names:
            reports.extend(CHECKS[check](case, tol, series_tol, debug, branch))
    return reports
