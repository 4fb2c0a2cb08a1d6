from abc import ABC, abstractmethod

import numpy as np

from ..constants import TWO_PI
from ..exceptions import ConfluenceError


class Branch(ABC):
    """Abstract base class for logarithm branches.

    A branch is a half-open argument window ``(lower, lower + 2*pi]``.
    Every power and logarithm in the library goes through one, so no
    formula depends on an implicit principal value.
    """

    @property
    @abstractmethod
    def lower(self) -> float:
        """Open lower end of the argument window."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Short label used when matrices are serialized."""

    @property
    def upper(self) -> float:
        return self.lower + TWO_PI

    def arg(self, z: complex) -> float:
        """Argument of ``z`` inside the window.

        Args:
            z: Non-zero complex number

        Returns:
            The unique angle ``a`` with ``lower < a <= lower + 2*pi``

        Raises:
            ConfluenceError: If z is zero
        """
        z = complex(z)
        if z == 0:
            raise ConfluenceError(
                f"Argument of zero is undefined on branch '{self.name}'"
            )
        a = float(np.angle(z))
        while a <= self.lower:
            a += TWO_PI
        while a > self.upper:
            a -= TWO_PI
        return a

    def log(self, z: complex) -> complex:
        z = complex(z)
        if z == 0:
            raise ConfluenceError(
                f"Logarithm of zero is undefined on branch '{self.name}'"
            )
        return complex(np.log(abs(z)), self.arg(z))

    def power(self, z: complex, c: complex) -> complex:
        """Return ``z**c = exp(c * log z)`` with ``log`` on this branch."""
        if c == 0:
            return 1.0 + 0.0j
        return complex(np.exp(complex(c) * self.log(z)))

    def contains(self, angle: float) -> bool:
        return self.lower < angle <= self.upper

    def __repr__(self) -> str:
        return f"{type(self).__name__}(lower={self.lower!r})"
