"""JSON encoding of complex scalars and matrices as ``[re, im]`` pairs."""

from typing import Any

import numpy as np

from .exceptions import ConfigError


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(value: Any, name: str = "value") -> complex:
    """Accept ``[re, im]`` or a bare real number."""
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
            return complex(float(re), float(im))
    raise ConfigError(f"{name} must be a number or [re, im], got {value!r}")


def encode_matrix(m: Any) -> list[list[list[float]]]:
    """Row-major nested ``[re, im]`` lists."""
    arr = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    return [[encode_complex(z) for z in row] for row in arr]


def decode_matrix(value: Any, name: str = "matrix") -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list of rows")
    rows = [[decode_complex(z, name) for z in row] for row in value]
    if len({len(r) for r in rows}) != 1:
        raise ConfigError(f"{name} rows have different lengths")
    return np.asarray(rows, dtype=np.complex128)
