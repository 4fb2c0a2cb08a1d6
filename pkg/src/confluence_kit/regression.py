"""Frozen parameter draws used by the regression checks."""

from dataclasses import dataclass

from .exceptions import ConfigError
from .hg_model import HGParams


@dataclass(frozen=True)
class RegressionCase:
    name: str
    params: HGParams
    rho_minus: complex

    @property
    def minus_params(self) -> HGParams:
        return self.params.with_rho(self.rho_minus)


REGRESSION_SET: dict[str, RegressionCase] = {
    case.name: case
    for case in (
        RegressionCase(
            "gauss_real", HGParams((0.31, 0.47), (1.23,), 2.37), -2.37 + 0.4j
        ),
        RegressionCase(
            "gauss_complex",
            HGParams((0.2 + 0.1j, 0.55 - 0.05j), (1.4 + 0.2j,), 3.1 + 0.7j),
            -3.1 + 0.5j,
        ),
        RegressionCase(
            "cubic_real", HGParams((0.21, 0.43, 0.67), (1.13, 1.41), 2.29), -2.29 + 0.4j
        ),
        RegressionCase(
            "cubic_complex",
            HGParams(
                (0.15 + 0.05j, 0.38, 0.61 - 0.1j), (1.27 + 0.1j, 1.52), 3.3 + 0.4j
            ),
            -3.3 + 0.6j,
        ),
        RegressionCase(
            "quartic",
            HGParams((0.12, 0.34, 0.56, 0.71), (1.09, 1.33, 1.57), 2.62),
            -2.62 + 0.4j,
        ),
    )
}


def regression_case(name: str) -> RegressionCase:
    try:
        return REGRESSION_SET[name]
    except KeyError:
        raise ConfigError(
            f"Unknown regression case '{name}'. Known: {sorted(REGRESSION_SET)}"
        ) from None
