"""Command-line entry point: ``confluence-kit [--debug] <command> [options]``.

JSON goes to stdout (CSV too, when a sweep has no ``--out``), debug lines
to stderr. Exit codes: 0 success, 1 numerical failure or failed check,
2 usage or validation error.
"""

import argparse
import json
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional

from .borel_laplace import laplace_stokes_limit
from .branches import PRINCIPAL, UPPER_CUT, Branch, CutBranch
from .builder import Kit, Tolerances
from .closed_form import (
    MonodromySet,
    StokesSet,
    conjugation_route,
    monodromies,
    stokes_confluent,
    stokes_limit,
)
from .codec import decode_matrix, encode_complex, encode_matrix
from .constants import (
    BASE_POINT,
    DEFAULT_QUAD_TOL,
    DEFAULT_RK_TOL,
    DEFAULT_SERIES_TOL,
)
from .cplx_core import deviation
from .exceptions import (
    ConfigError,
    ConfluenceError,
    DimensionError,
    PoleError,
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
from .regression import REGRESSION_SET, RegressionCase, regression_case
from .verification import (
    CHECKS,
    confluence_sweep,
    numeric_monodromies,
    run_regression,
)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2

_USAGE_ERRORS = (ConfigError, ResonanceError, SectorError, PoleError, DimensionError)

_MONODROMY_KEYS = ("m0_plus", "m1_plus", "m0_minus", "m1_minus")


def parse_branch(value: Any) -> Branch:
    """``"principal"``, ``"upper"`` or the lower end of the argument window."""
    if isinstance(value, Branch):
        return value
    if value == PRINCIPAL.name:
        return PRINCIPAL
    if value == UPPER_CUT.name:
        return UPPER_CUT
    try:
        lower = float(value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"Branch must be 'principal', 'upper' or a number, got {value!r}"
        ) from None
    if not math.isfinite(lower):
        raise ConfigError(f"Branch lower bound must be finite, got {value!r}")
    return CutBranch(lower)


def parse_complex(text: str, name: str = "value") -> complex:
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError:
        raise ConfigError(f"{name} must be a complex number, got {text!r}") from None


def parse_radii(text: str) -> list[float]:
    parts = [t for t in str(text).split(",") if t.strip()]
    try:
        radii = [float(t) for t in parts]
    except ValueError:
        raise ConfigError(
            f"Radii must be comma separated numbers, got {text!r}"
        ) from None
    if not radii:
        raise ConfigError("Sweep radii must not be empty")
    return radii


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every command, from flags or a JSON config file.

    ``params`` is inline JSON or a path to a JSON file; ``case`` names a
    member of the frozen regression set instead.
    """

    command: str
    params: Optional[str] = None
    case: Optional[str] = None
    output_format: str = "json"
    rk_tol: float = DEFAULT_RK_TOL
    series_tol: float = DEFAULT_SERIES_TOL
    quad_tol: float = DEFAULT_QUAD_TOL
    branch: str = PRINCIPAL.name
    debug: bool = False

    def __post_init__(self):
        if self.output_format not in ("json", "csv"):
            raise ConfigError(
                f"Output format must be 'json' or 'csv', got {self.output_format!r}"
            )
        if self.params is not None and self.case is not None:
            raise ConfigError("Give either params or a regression case, not both")
        self.tolerances()
        self.zero_branch()

    @classmethod
    def keys(cls) -> set[str]:
        return {f.name for f in fields(cls)} - {"command"}

    @classmethod
    def from_file(cls, path: str, command: str, **overrides: Any) -> "RunConfig":
        """Config file values, overridden by the non-``None`` flags.

        Raises:
            ConfigError: If the file is unreadable, not a JSON object or has
                unknown keys
        """
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config file '{path}': {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("Config file must hold a JSON object")
        unknown = set(data) - cls.keys()
        if unknown:
            raise ConfigError(f"Unknown config keys: {sorted(unknown)}")
        if isinstance(data.get("params"), dict):
            data["params"] = json.dumps(data["params"])
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(command=command, **data)

    def tolerances(self) -> Tolerances:
        return Tolerances(self.rk_tol, self.series_tol, self.quad_tol)

    def zero_branch(self) -> Branch:
        return parse_branch(self.branch)

    def load_params(self) -> HGParams:
        if self.case is not None:
            return regression_case(self.case).params
        if self.params is None:
            raise ConfigError("No parameters given: use --params or --case")
        text = self.params.strip()
        if not text.startswith("{"):
            try:
                text = Path(text).read_text()
            except OSError as e:
                raise ConfigError(f"Cannot read parameter file '{text}': {e}") from e
        return HGParams.from_json(text)


def _branch_json(branch: Optional[Branch]) -> Optional[dict[str, Any]]:
    if branch is None:
        return None
    return {"name": branch.name, "lower": branch.lower}


def _finite(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def _monodromy_json(m: MonodromySet) -> dict[str, Any]:
    out = {key: encode_matrix(getattr(m, key)) for key in _MONODROMY_KEYS}
    out["C"] = encode_matrix(m.C)
    return out


def _stokes_json(s: StokesSet) -> dict[str, Any]:
    return {
        "S_U": encode_matrix(s.S_U),
        "S_L": encode_matrix(s.S_L),
        "N0": encode_matrix(s.N0),
        "M0": encode_matrix(s.M0),
        "M1": encode_matrix(s.M1),
        "sign": s.sign,
        "branch": {"rho": _branch_json(s.branch)},
    }


def cmd_build(config: RunConfig) -> tuple[dict[str, Any], int]:
    """Matrices ``A``, ``B``, ``R``, ``At_D`` and ``gamma`` of the system."""
    p = config.load_params()
    ensure_valid(p)
    fr = frame(p)
    out: dict[str, Any] = {
        "params": p.to_json(),
        "n": p.n,
        "A": encode_matrix(build_companion(p)),
        "B": encode_matrix(b_matrix(p.n)),
        "R": encode_matrix(fr.R),
        "At_D": encode_matrix(fr.At_D),
        "gamma": encode_complex(p.gamma),
    }
    if p.is_limit:
        out["system"] = "limit"
        out["form"] = "z^2 psi' = (B + z A) psi"
    else:
        out["system"] = "okubo"
        out["form"] = "(s - B) v' = (A + rho) v"
        out["floquet"] = {
            "s": encode_complex(BASE_POINT),
            "matrix": encode_matrix(Kit.floquet(p, BASE_POINT)),
            "branch": {
                "s": _branch_json(Kit.get_branch()),
                "s-1": _branch_json(UPPER_CUT),
            },
        }
    return out, EXIT_OK


def cmd_monodromy(
    config: RunConfig,
    method: str = "closed",
    rho: Optional[complex] = None,
    tolerance: float = 1e-6,
) -> tuple[dict[str, Any], int]:
    """Monodromies of ``V~+`` and ``V~-`` based at ``s = 1/2``.

    With ``method="both"`` the entrywise deviation is reported and a value
    above ``tolerance`` exits 1.
    """
    if method not in ("closed", "numeric", "both"):
        raise ConfigError(f"Unknown monodromy method {method!r}")
    p = config.load_params()
    p = p if rho is None else p.with_rho(rho)
    p.finite_rho()
    ensure_valid(p)
    out: dict[str, Any] = {
        "params": p.to_json(),
        "method": method,
        "base_point": encode_complex(BASE_POINT),
        "branch": {
            "s": _branch_json(Kit.get_branch()),
            "s-1": _branch_json(UPPER_CUT),
        },
    }
    code = EXIT_OK
    closed = numeric = None
    if method in ("closed", "both"):
        closed = monodromies(p, branch=Kit.get_branch())
        out["closed"] = _monodromy_json(closed)
    if method in ("numeric", "both"):
        tol = Kit.get_tolerances()
        numeric = numeric_monodromies(
            p, tol.rk_tol, tol.series_tol, Kit._debug, Kit.get_branch()
        )
        out["numeric"] = _monodromy_json(numeric)
    if closed is not None and numeric is not None:
        dev = max(
            deviation(getattr(numeric, key), getattr(closed, key))
            for key in _MONODROMY_KEYS
        )
        out["deviation"] = dev
        out["tolerance"] = tolerance
        if not dev <= tolerance:
            code = EXIT_NUMERIC
    return out, code


def _read_limit(path: str) -> tuple[Any, Any]:
    """``S_U`` and ``S_L`` from a saved ``stokes --limit`` output."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read limit Stokes file '{path}': {e}") from e
    if not isinstance(data, dict) or not {"S_U", "S_L"} <= set(data):
        raise ConfigError(f"'{path}' holds no S_U and S_L")
    return decode_matrix(data["S_U"], "S_U"), decode_matrix(data["S_L"], "S_L")


def cmd_stokes(
    config: RunConfig,
    rho: Optional[complex] = None,
    limit: bool = False,
    sign: str = "+",
    route: str = "closed",
    limit_json: Optional[str] = None,
) -> tuple[dict[str, Any], int]:
    """Stokes matrices in the tilde frame at finite rho or in the limit.

    ``route="laplace"`` resums the limit system numerically; with a finite
    rho the result is carried over by the conjugation route. ``limit_json``
    names a saved ``stokes --limit`` output whose ``S_U`` and ``S_L`` the
    conjugation route starts from.
    """
    if sign not in ("+", "-"):
        raise ConfigError(f"Sign must be '+' or '-', got {sign!r}")
    if route not in ("closed", "conjugation", "laplace"):
        raise ConfigError(f"Unknown Stokes route {route!r}")
    if limit_json is not None and route != "conjugation":
        raise ConfigError("--limit-json needs the conjugation route")
    p = config.load_params()
    if limit:
        p = p.with_rho(None)
    elif rho is not None:
        p = p.with_rho(rho)
    out: dict[str, Any] = {"params": p.to_json(), "route": route, "frame": "tilde"}
    tol = Kit.get_tolerances()

    def laplace() -> tuple[Any, Any]:
        ls = laplace_stokes_limit(p, tol.rk_tol, tol.quad_tol, Kit._debug)
        out["spread"] = ls.spread
        return ls.S_U, ls.S_L

    if p.is_limit:
        if route == "conjugation":
            raise ConfigError("The conjugation route needs a finite rho")
        ensure_valid(p)
        S_U, S_L = laplace() if route == "laplace" else stokes_limit(p)
        out.update(
            S_U=encode_matrix(S_U), S_L=encode_matrix(S_L), branch={"rho": None}
        )
        return out, EXIT_OK

    ensure_valid(p, ParameterSector(sign))
    if route == "closed":
        stokes = stokes_confluent(p, sign=sign)
    elif route == "conjugation":
        S_inf = None if limit_json is None else _read_limit(limit_json)
        if S_inf is not None and any(S.shape != (p.n, p.n) for S in S_inf):
            raise DimensionError(f"Limit Stokes matrices must be {p.n}x{p.n}")
        stokes = conjugation_route(p, sign=sign, S_inf=S_inf)
    else:
        stokes = conjugation_route(p, sign=sign, S_inf=laplace())
    out.update(_stokes_json(stokes))
    return out, EXIT_OK


def _adhoc_case(p: HGParams) -> RegressionCase:
    r = p.finite_rho()
    return RegressionCase("params", p, -r)


def cmd_check(
    config: RunConfig, names: Sequence[str] = (), run_all: bool = False
) -> tuple[list[dict[str, Any]], int]:
    """Run checks over the frozen regression set, one case or given params.

    Returns:
        Report dicts in run order, exit 0 iff every report passed
    """
    if run_all == bool(names):
        raise ConfigError("Give either --all or check names")
    if config.params is not None:
        cases: Optional[list[Any]] = [_adhoc_case(config.load_params())]
    elif config.case is not None:
        cases = [config.case]
    else:
        cases = None
    tol = Kit.get_tolerances()
    reports = run_regression(
        None if run_all else list(names),
        cases,
        tol=tol.rk_tol,
        series_tol=tol.series_tol,
        debug=Kit._debug,
        branch=Kit.get_branch(),
    )
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_NUMERIC
    return [r.to_json() for r in reports], code


def cmd_sweep(
    config: RunConfig,
    sign: str = "+",
    ray: Optional[float] = None,
    radii: Sequence[float] = (10.0, 100.0, 1000.0),
    out: Optional[str] = None,
) -> tuple[Any, int]:
    """Confluence sweep along a ray of ``rho``.

    Returns:
        CSV text when no ``out`` is given and the format is csv, else a JSON
        summary (the CSV goes to ``out`` when given)
    """
    if sign not in ("+", "-"):
        raise ConfigError(f"Sign must be '+' or '-', got {sign!r}")
    p = config.load_params()
    result = confluence_sweep(p, sign, ray, radii, debug=Kit._debug)
    text = result.to_csv()
    if out is None and config.output_format == "csv":
        return text, EXIT_OK
    summary: dict[str, Any] = {
        "params": p.to_json(),
        "sign": sign,
        "radii": [float(r) for r in radii],
        "norms": list(result.norms),
        "slope": _finite(result.slope),
    }
    if out is None:
        summary["rows"] = [
            {
                "abs_rho": row.abs_rho,
                "arg_rho": row.arg_rho,
                "entry": list(row.entry),
                "deviation": row.deviation,
                "slope": _finite(row.slope),
            }
            for row in result.rows
        ]
    else:
        try:
            Path(out).write_text(text)
        except OSError as e:
            raise ConfigError(f"Cannot write '{out}': {e}") from e
        summary["out"] = out
    return summary, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig keys")
    source = common.add_mutually_exclusive_group()
    source.add_argument("--params", help="Parameter JSON, inline or a file path")
    source.add_argument("--case", help=f"Regression case: {sorted(REGRESSION_SET)}")
    common.add_argument("--format", dest="output_format", choices=["json", "csv"])
    common.add_argument("--rk-tol", type=float)
    common.add_argument("--series-tol", type=float)
    common.add_argument("--quad-tol", type=float)
    common.add_argument(
        "--branch", help="Branch of s**c at the origin: principal, upper or a number"
    )

    parser = argparse.ArgumentParser(
        prog="confluence-kit",
        description="Monodromy, Stokes and confluence checks for the "
        "generalized hypergeometric system.",
    )
    parser.add_argument("--debug", action="store_true", help="Diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("build", parents=[common], help="System matrices as JSON")

    mono = sub.add_parser("monodromy", parents=[common], help="Monodromy matrices")
    mono.add_argument(
        "--method", choices=["closed", "numeric", "both"], default="closed"
    )
    mono.add_argument("--rho", help="Override rho, e.g. 2.5 or 3+0.5j")
    mono.add_argument("--tolerance", type=float, default=1e-6)

    stokes = sub.add_parser("stokes", parents=[common], help="Stokes matrices")
    where = stokes.add_mutually_exclusive_group()
    where.add_argument("--rho", help="Finite rho, e.g. 100 or --rho=-100+1j")
    where.add_argument("--limit", action="store_true", help="Limit system")
    stokes.add_argument("--sign", choices=["+", "-"], default="+")
    stokes.add_argument(
        "--route", choices=["closed", "conjugation", "laplace"], default="closed"
    )
    stokes.add_argument(
        "--limit-json", help="Saved stokes --limit output for the conjugation route"
    )

    check = sub.add_parser("check", parents=[common], help="Run identity checks")
    check.add_argument("names", nargs="*", help=f"Checks: {sorted(CHECKS)}")
    check.add_argument("--all", action="store_true", dest="run_all")

    sweep = sub.add_parser("sweep", parents=[common], help="Confluence sweep")
    sweep.add_argument("--sign", choices=["+", "-"], default="+")
    sweep.add_argument("--ray", type=float, help="arg rho of the ray in radians")
    sweep.add_argument("--radii", default="10,100,1000")
    sweep.add_argument("--out", help="CSV output file")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    flags = {key: getattr(args, key, None) for key in RunConfig.keys()}
    flags["debug"] = True if args.debug else None
    if args.config:
        return RunConfig.from_file(args.config, args.command, **flags)
    return RunConfig(args.command, **{k: v for k, v in flags.items() if v is not None})


def _dispatch(args: argparse.Namespace, config: RunConfig) -> tuple[Any, int]:
    if args.command == "build":
        return cmd_build(config)
    if args.command == "monodromy":
        rho = None if args.rho is None else parse_complex(args.rho, "rho")
        return cmd_monodromy(config, args.method, rho, args.tolerance)
    if args.command == "stokes":
        rho = None if args.rho is None else parse_complex(args.rho, "rho")
        return cmd_stokes(
            config, rho, args.limit, args.sign, args.route, args.limit_json
        )
    if args.command == "check":
        return cmd_check(config, args.names, args.run_all)
    return cmd_sweep(config, args.sign, args.ray, parse_radii(args.radii), args.out)


def _error_payload(exc: ConfluenceError) -> dict[str, Any]:
    if isinstance(exc, ResonanceError) and exc.violations:
        violations = [v.to_json() for v in exc.violations]
    elif isinstance(exc, PoleError):
        violations = [
            {"code": "gamma_pole", "message": str(exc), "distance": exc.distance}
        ]
    else:
        violations = [{"code": type(exc).__name__, "message": str(exc)}]
    return {"error": type(exc).__name__, "message": str(exc), "violations": violations}


def _emit(payload: Any) -> None:
    if isinstance(payload, str):
        sys.stdout.write(payload)
    elif isinstance(payload, list):
        for item in payload:
            print(json.dumps(item, sort_keys=True))
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    saved = (Kit._debug, Kit.get_tolerances(), Kit.get_branch())
    try:
        config = _config_from_args(args)
        Kit.set_debug(config.debug)
        Kit.set_tolerances(
            rk_tol=config.rk_tol,
            series_tol=config.series_tol,
            quad_tol=config.quad_tol,
        )
        Kit.set_branch(config.zero_branch())
        payload, code = _dispatch(args, config)
    except _USAGE_ERRORS as e:
        _emit(_error_payload(e))
        return EXIT_USAGE
    except ConfluenceError as e:
        _emit(_error_payload(e))
        return EXIT_NUMERIC
    finally:
        Kit._debug, Kit._tolerances, Kit._branch = saved
    _emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
