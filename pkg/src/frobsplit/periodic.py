"""Dist(T) ⊗ F_p as periodic functions on a finite grid.

Mod p, the span of binom(H, b) with every b_i < N = p^K is a subalgebra, and
h -> (binom(h_i, b_i))_i identifies it with the algebra of N-periodic
functions Z^rank -> F_p under pointwise multiplication.  Elements here are
value tables on (Z/N)^rank; products are pointwise, shifts H -> H + s are
rolls, and conversion to and from the binomial basis is the Mahler transform
(unitriangular, so the identification is exact).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .arith import Ring, binom, check_prime
from .torus import TorusElement


@lru_cache(maxsize=None)
def pascal_mod_p(p: int, n: int) -> np.ndarray:
    """table[h, b] = binom(h, b) mod p for 0 <= h, b < n."""
    t = np.zeros((n, n), dtype=np.int64)
    t[:, 0] = 1
    for h in range(1, n):
        t[h, 1:] = (t[h - 1, 1:] + t[h - 1, :-1]) % p
    t.flags.writeable = False
    return t


@lru_cache(maxsize=None)
def mahler_inverse(p: int, n: int) -> np.ndarray:
    """D[b, h] = (-1)^(b-h) binom(b, h) mod p, the inverse of pascal_mod_p."""
    d = np.zeros((n, n), dtype=np.int64)
    for b in range(n):
        for h in range(b + 1):
            d[b, h] = ((-1) ** (b - h) * binom(b, h)) % p
    d.flags.writeable = False
    return d


def _is_power_of(p: int, n: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _along(mat: np.ndarray, values: np.ndarray, axis: int, p: int) -> np.ndarray:
    out = np.tensordot(mat, values, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis) % p


class PeriodicTorus:
    __slots__ = ("p", "period", "rank", "values", "_hash")

    def __init__(self, p: int, period: int, values: np.ndarray):
        self.p = p
        self.period = period
        self.rank = values.ndim
        v = np.ascontiguousarray(values, dtype=np.int64) % p
        v.flags.writeable = False
        self.values = v
        self._hash = None

    # ---- constructors
    @classmethod
    def check_period(cls, p: int, period: int):
        check_prime(p)
        if period < 1 or not _is_power_of(p, period):
            raise ValueError(f"period {period} is not a power of {p}")

    @classmethod
    def constant(cls, p, period, rank, value=1):
        return cls(p, period, np.full((period,) * rank, value, dtype=np.int64))

    @classmethod
    def zero(cls, p, period, rank):
        return cls.constant(p, period, rank, 0)

    @classmethod
    def one(cls, p, period, rank):
        return cls.constant(p, period, rank, 1)

    @classmethod
    def from_element(cls, x: TorusElement, period: int, p: int = None) -> "PeriodicTorus":
        """Tabulate a basis element; requires every index below the period."""
        p = p if p is not None else x.ring.p
        cls.check_period(p, period)
        if x.terms and x.max_index() >= period:
            raise ValueError(f"index {x.max_index()} does not fit period {period}")
        table = pascal_mod_p(p, period)
        vals = np.zeros((period,) * x.rank, dtype=np.int64)
        for b, v in x.terms.items():
            term = np.array(v % p, dtype=np.int64)
            for bi in b:
                term = np.multiply.outer(term, table[:, bi]) % p
            vals = (vals + term) % p
        return cls(p, period, vals)

    @classmethod
    def lincomb_binom(cls, p: int, period: int, c: Sequence[int], m: int, r: int) -> "PeriodicTorus":
        """binom(sum_i c_i H_i + m, r) as a table; needs r < period."""
        if r >= period:
            raise ValueError(f"degree {r} does not fit period {period}")
        return cls(p, period, _lincomb_table(p, period, tuple(c), m % period, r))

    @classmethod
    def mu0(cls, p: int, period: int, rank: int) -> "PeriodicTorus":
        return cls(p, period, _mu0_table(p, period, rank))

    # ---- conversion
    def to_element(self) -> TorusElement:
        coefs = self.values
        d = mahler_inverse(self.p, self.period)
        for axis in range(self.rank):
            coefs = _along(d, coefs, axis, self.p)
        nz = np.nonzero(coefs)
        terms = {tuple(int(i) for i in idx): int(coefs[idx]) for idx in zip(*nz)}
        return TorusElement(self.rank, Ring(self.p), terms)

    def eval(self, h: Sequence[int]) -> int:
        return int(self.values[tuple(x % self.period for x in h)])

    # ---- arithmetic
    def _like(self, vals):
        return PeriodicTorus(self.p, self.period, vals)

    def _check(self, other):
        if (self.p, self.period, self.rank) != (other.p, other.period, other.rank):
            raise ValueError("grid mismatch")

    def __add__(self, other):
        self._check(other)
        return self._like(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.values - other.values)

    def __neg__(self):
        return self._like(-self.values)

    def scale(self, k: int):
        return self._like(self.values * (k % self.p))

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        self._check(other)
        return self._like(self.values * other.values)

    def __rmul__(self, k):
        if isinstance(k, (int, np.integer)):
            return self.scale(int(k))
        return NotImplemented

    def shift(self, s: Sequence[int]) -> "PeriodicTorus":
        """Substitute H_i -> H_i + s_i."""
        s = [x % self.period for x in s]
        if not any(s):
            return self
        return self._like(np.roll(self.values, [-x for x in s], axis=tuple(range(self.rank))))

    def __eq__(self, other):
        if not isinstance(other, PeriodicTorus):
            return NotImplemented
        return (
            (self.p, self.period) == (other.p, other.period)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.period, self.values.shape, self.values.tobytes()))
        return self._hash

    def __bool__(self):
        return bool(self.values.any())

    def __repr__(self):
        return f"PeriodicTorus(p={self.p}, period={self.period}, {self.to_element()!r})"

    # ---- Frobenius structure
    def frobenius(self) -> "PeriodicTorus":
        """Pullback along h -> p h; on the basis, binom(H, b) -> binom(H, b/p) or 0."""
        idx = (self.p * np.arange(self.period)) % self.period
        return self._like(self.values[np.ix_(*([idx] * self.rank))])

    def has_period(self, n: int) -> bool:
        return all(
            np.array_equal(self.values, np.roll(self.values, n, axis=a)) for a in range(self.rank)
        )

    def phi0(self) -> "PeriodicTorus":
        """h -> f(h/p) on p-divisible h, 0 elsewhere; on the basis,
        binom(H, b) -> binom(H, p b) mu0.  Needs f to be (period/p)-periodic."""
        n = self.period // self.p
        if n == 0 or not self.has_period(n):
            raise ValueError("phi0 image does not fit the grid; enlarge the period")
        out = np.zeros_like(self.values)
        sl = tuple(slice(0, None, self.p) for _ in range(self.rank))
        src = tuple(slice(0, n) for _ in range(self.rank))
        out[sl] = self.values[src]
        return self._like(out)


@lru_cache(maxsize=None)
def _lincomb_table(p, period, c, m, r):
    table = pascal_mod_p(p, period)
    rank = len(c)
    grids = np.meshgrid(*([np.arange(period)] * rank), indexing="ij")
    x = np.full((period,) * rank, m, dtype=np.int64)
    for ci, g in zip(c, grids):
        x = x + ci * g
    vals = table[x % period, r]
    vals.flags.writeable = False
    return vals


@lru_cache(maxsize=None)
def _mu0_table(p, period, rank):
    ind = (np.arange(period) % p == 0).astype(np.int64)
    vals = np.array(1, dtype=np.int64)
    for _ in range(rank):
        vals = np.multiply.outer(vals, ind)
    vals.flags.writeable = False
    return vals
