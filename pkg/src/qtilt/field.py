"""Exact ground fields: the rationals and prime fields GF(p).

Field elements live inside numpy arrays.  Prime fields below 2**20 use
``int64`` storage (products of two residues fit comfortably); larger primes
use ``object`` arrays of Python ints and the rationals ``object`` arrays of
``gmpy2.mpq``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from gmpy2 import mpq

_INT64_PRIME_LIMIT = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class GroundField:
    """The rationals (``characteristic == 0``) or GF(p)."""

    characteristic: int

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0:
            if not _is_prime(p):
                raise ValueError(f"characteristic {p} is not prime")
            if p >= 2**31:
                raise ValueError(f"prime {p} is too large (must be < 2^31)")

    @classmethod
    def rationals(cls) -> "GroundField":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "GroundField":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def dtype(self):
        p = self.characteristic
        return np.int64 if 0 < p < _INT64_PRIME_LIMIT else object

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"GF({self.characteristic})"

    def to_json(self) -> Any:
        return "Q" if self.characteristic == 0 else {"GF": self.characteristic}

    # scalars -------------------------------------------------------------

    def __call__(self, x: Any) -> Any:
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(x, str):
            return self.parse(x)
        p = self.characteristic
        if p == 0:
            return mpq(x.numerator, x.denominator) if isinstance(x, Fraction) else mpq(x)
        if isinstance(x, Fraction) or type(x) is type(mpq(0)):
            return (int(x.numerator) * pow(int(x.denominator) % p, -1, p)) % p
        return int(x) % p

    def parse(self, text: str) -> Any:
        text = text.strip()
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a field element: {text!r}") from exc
        if self.characteristic and value.denominator % self.characteristic == 0:
            raise ValueError(f"{text!r} has no value in {self}")
        return self(value)

    def format(self, x: Any) -> str:
        return str(x)

    def zero(self) -> Any:
        return mpq(0) if self.characteristic == 0 else 0

    def one(self) -> Any:
        return mpq(1) if self.characteristic == 0 else 1

    def inv(self, x: Any) -> Any:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p == 0:
            return 1 / mpq(x)
        return pow(int(x), -1, p)

    def normalize(self, x: Any) -> Any:
        return x % self.characteristic if self.characteristic else x

    def add(self, a: Any, b: Any) -> Any:
        return self.normalize(a + b)

    def sub(self, a: Any, b: Any) -> Any:
        return self.normalize(a - b)

    def mul(self, a: Any, b: Any) -> Any:
        return self.normalize(a * b)

    def neg(self, a: Any) -> Any:
        return self.normalize(-a)

    # arrays --------------------------------------------------------------

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, self.zero(), dtype=object)
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def array(self, data: Any) -> np.ndarray:
        """Build an array from nested lists of ints, Fractions or strings."""
        raw = np.array(data, dtype=object)
        out = self.zeros(raw.shape)
        for idx, value in np.ndenumerate(raw):
            out[idx] = self(value)
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        """Bring an array computed with plain integer arithmetic back into range."""
        if self.characteristic:
            return a % self.characteristic
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros((a.shape[0], b.shape[1]))
        return self.reduce(a @ b)

    def random_array(self, rng: np.random.Generator, shape, low: int = -3, high: int = 3) -> np.ndarray:
        """Uniform entries over GF(p); small integers over Q."""
        p = self.characteristic
        if p:
            vals = rng.integers(0, p, size=shape)
            return vals.astype(np.int64) if self.dtype is not object else self.array(vals.tolist())
        vals = rng.integers(low, high + 1, size=shape)
        return self.array(vals.tolist()) if np.prod(shape) else self.zeros(shape)

    def random_scalar(self, rng: np.random.Generator, nonzero: bool = False) -> Any:
        p = self.characteristic
        while True:
            x = int(rng.integers(0, p)) if p else mpq(int(rng.integers(-1000, 1001)))
            if not nonzero or x != 0:
                return x

    def elements(self):
        """All elements of a finite field, in increasing order."""
        if not self.characteristic:
            raise ValueError("the rationals are infinite")
        return range(self.characteristic)


QQ = GroundField(0)
GF2 = GroundField(2)
