"""
Field - The two arithmetic realisations used for elimination.

ModP works in F_p with numpy integer arrays; ExactRational works over Q
with Python integers and Fractions and is capped in dimension.
"""

from __future__ import annotations

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import isprime

from ..core.errors import ExactCapExceededError
from ..core.settings import DEFAULT_PRIME

# Entries below 2**31 and inner dimension <= 64 keep limb-split float64 products exact.
_FAST_PRIME_LIMIT = 1 << 31
_LIMB = 1 << 16
MAX_PANEL = 64


class ModP(BaseModel):
    """Arithmetic modulo an odd prime."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["mod_p"] = "mod_p"
    prime: int = DEFAULT_PRIME

    @field_validator("prime")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if value <= 2 or value >= 1 << 64 or not isprime(value):
            raise ValueError(f"ModP needs an odd prime below 2**64, got {value}")
        return value

    @property
    def fast(self) -> bool:
        """True when int64 storage and float64 BLAS products are exact."""
        return self.prime < _FAST_PRIME_LIMIT

    @property
    def dtype(self) -> type | np.dtype:
        return np.dtype(np.int64) if self.fast else object

    def reduce(self, values: np.ndarray) -> np.ndarray:
        """Canonical representatives in [0, p)."""
        array = np.asarray(values)
        if self.fast:
            if array.dtype == object:
                flat = [int(v) % self.prime for v in array.ravel()]
                return np.array(flat, dtype=np.int64).reshape(array.shape)
            return np.mod(array.astype(np.int64), self.prime)
        return np.vectorize(lambda v: int(v) % self.prime, otypes=[object])(array)

    def inverse(self, value: int) -> int:
        return pow(int(value) % self.prime, -1, self.prime)

    def matmul(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """(left @ right) mod p for reduced operands with inner dimension <= 64."""
        if not self.fast or left.shape[1] > MAX_PANEL:
            product = left.astype(object) @ right.astype(object)
            return self.reduce(product)
        right_f = right.astype(np.float64)
        lo = (left % _LIMB).astype(np.float64) @ right_f
        hi = (left // _LIMB).astype(np.float64) @ right_f
        lo_i = lo.astype(np.int64) % self.prime
        hi_i = hi.astype(np.int64) % self.prime
        return (hi_i * _LIMB + lo_i) % self.prime

    def __str__(self) -> str:
        return f"ModP({self.prime})"


class ExactRational(BaseModel):
    """Arithmetic over Q by fraction-free elimination, capped in dimension."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["exact"] = "exact"
    cap: int = Field(default=64, ge=1)

    def check_dimension(self, rows: int, cols: int) -> None:
        if max(rows, cols) > self.cap:
            raise ExactCapExceededError(
                f"exact elimination limited to dimension {self.cap}, got {rows}x{cols}"
            )

    def __str__(self) -> str:
        return f"ExactRational(cap={self.cap})"


FieldMode = Annotated[ModP | ExactRational, Field(discriminator="kind")]

DEFAULT_FIELD = ModP()


def field_from_name(name: str, prime: int = DEFAULT_PRIME, cap: int = 64) -> ModP | ExactRational:
    """Parse the short names used on the command line and in spec files."""
    if name in ("mod_p", "modp"):
        return ModP(prime=prime)
    if name in ("exact", "rational"):
        return ExactRational(cap=cap)
    raise ValueError(f"unknown field mode {name!r}")
