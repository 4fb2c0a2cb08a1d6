"""Complex Gamma function helpers.

Values come from ``scipy.special.gamma`` and ``scipy.special.loggamma``.
The latter is the principal log-Gamma, continuous off the negative real
axis, so ratios of large Gamma values are formed as exponentials of
log-Gamma differences and never overflow in between.
"""

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy import special

from .branches import PRINCIPAL, Branch
from .constants import POLE_DISTANCE
from .exceptions import ConfluenceError, PoleError


@dataclass(frozen=True)
class GammaEval:
    value: complex
    log_value: complex


def pole_distance(z: complex) -> float:
    """Distance from ``z`` to the nearest non-positive integer."""
    z = complex(z)
    k = min(0.0, float(np.round(z.real)))
    return abs(z - k)


def check_pole(z: complex, label: str = "z") -> None:
    dist = pole_distance(z)
    if dist < POLE_DISTANCE:
        raise PoleError(
            f"Gamma argument {label} = {complex(z):.6g} is {dist:.2e} "
            f"from a pole",
            label=label,
            distance=dist,
        )


def log_gamma(z: complex, label: str = "z") -> complex:
    check_pole(z, label)
    return complex(special.loggamma(complex(z)))


def gamma(z: complex, label: str = "z") -> GammaEval:
    """Evaluate Gamma at a complex point.

    Args:
        z: Argument, at least 1e-8 away from the poles 0, -1, -2, ...
        label: Name of the argument used in error messages

    Returns:
        GammaEval holding the value and the principal log-Gamma

    Raises:
        PoleError: If z is too close to a pole
    """
    lg = log_gamma(z, label)
    return GammaEval(value=complex(special.gamma(complex(z))), log_value=lg)


def pochhammer(a: complex, k: int) -> complex:
    """Rising factorial ``a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``."""
    if k < 0:
        raise ConfluenceError(f"Pochhammer order must be non-negative, got {k}")
    if k == 0:
        return 1.0 + 0.0j
    return complex(np.prod(complex(a) + np.arange(k, dtype=np.float64)))


def log_gamma_quotient(
    numer: Iterable[tuple[str, complex]], denom: Iterable[tuple[str, complex]]
) -> complex:
    """Log of ``prod Gamma(numer) / prod Gamma(denom)``.

    Arguments come as ``(label, value)`` pairs so that a pole in either
    product is reported by name.
    """
    total = 0j
    for label, z in numer:
        total += log_gamma(z, label)
    for label, z in denom:
        total -= log_gamma(z, label)
    return total


def gamma_ratio(
    a: complex, b: complex, rho: complex, branch: Branch = PRINCIPAL
) -> complex:
    """``rho**(a-b) * Gamma(b+rho) / Gamma(a+rho)`` in log space.

    Tends to 1 as ``|rho| -> oo`` away from the negative real pole string.
    """
    a, b, rho = complex(a), complex(b), complex(rho)
    log_q = log_gamma_quotient([("b+rho", b + rho)], [("a+rho", a + rho)])
    return complex(np.exp((a - b) * branch.log(rho) + log_q))
