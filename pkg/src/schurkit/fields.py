"""Small finite fields GF(p^k).

An element is an int ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` holding the
coefficients of a polynomial in a root ``w`` of a fixed primitive polynomial.
The polynomial is the lexicographically least monic primitive one (coefficients
compared from the constant term up), so ``w`` generates the multiplicative
group and tables are reproducible.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q = p^k``, or None."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    (p, k), = f.items()
    return p, k


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + int(d)
    return x


class GF:
    """The field with ``q = p^k`` elements."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"{q} is not a prime power")
        self.q = q
        self.p, self.k = pk
        self.poly = self._least_primitive_poly()
        self._build_tables()

    def _least_primitive_poly(self) -> tuple[int, ...]:
        """Coefficients ``(c_0, ..., c_{k-1})`` of ``x^k + sum c_i x^i``."""
        p, k, q = self.p, self.k, self.q
        for code in range(1, p**k):
            low = _digits(code, p, k)
            if low[0] == 0:
                continue
            if _mult_order_of_x(tuple(low), p) == q - 1:
                return tuple(low)
        raise RuntimeError(f"no primitive polynomial found for GF({q})")

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        vec = [1] + [0] * (k - 1)
        for i in range(q - 1):
            x = _undigits(vec, p)
            exp[i] = x
            log[x] = i
            vec = _times_x(vec, self.poly, p)
        exp[q - 1:] = exp[:q - 1]
        self.exp = exp
        self.log = log
        digits = np.array([_digits(x, p, k) for x in range(q)], dtype=np.int64).reshape(q, k)
        self._digits = digits
        self._place = p ** np.arange(k, dtype=np.int64)

    @property
    def primitive(self) -> int:
        return int(self.exp[1]) if self.q > 2 else 1

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._place)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return int(((-self._digits[a]) % self.p) @ self._place)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    def elements(self) -> range:
        return range(self.q)

    def add_table(self) -> np.ndarray:
        d = self._digits
        return ((d[:, None, :] + d[None, :, :]) % self.p) @ self._place

    def mul_table(self) -> np.ndarray:
        q = self.q
        lg = self.log
        t = np.zeros((q, q), dtype=np.int64)
        nz = np.arange(1, q)
        t[1:, 1:] = self.exp[lg[nz][:, None] + lg[nz][None, :]]
        return t

    def squares(self) -> list[int]:
        """Nonzero squares, in increasing order."""
        return sorted({self.mul(x, x) for x in range(1, self.q)})

    def __repr__(self) -> str:
        return f"GF({self.q})"


def _times_x(vec: list[int], low: tuple[int, ...], p: int) -> list[int]:
    k = len(vec)
    top = vec[-1]
    shifted = [0] + vec[:-1]
    return [(shifted[i] - top * low[i]) % p for i in range(k)]


def _mult_order_of_x(low: tuple[int, ...], p: int) -> int:
    k = len(low)
    if k == 1:
        # x = -c_0 in GF(p)
        g = (-low[0]) % p
        x, n = g, 1
        while x != 1:
            x = x * g % p
            n += 1
            if n > p:
                return -1
        return n
    one = [1] + [0] * (k - 1)
    vec = _times_x(one, low, p)
    n = 1
    limit = p**k
    while vec != one:
        vec = _times_x(vec, low, p)
        n += 1
        if n > limit:
            return -1
    return n


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
