"""Exact generalized binomials over Z and F_p, and the three expansion
primitives that every torus computation reduces to.

All expansions are finite maps ``{k: coeff}`` in the basis ``binom(X, k)``
with zero coefficients dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional

__all__ = [
    "Ring",
    "ZZ",
    "Fp",
    "is_prime",
    "check_prime",
    "binom",
    "binom_mod_p",
    "vandermonde_shift",
    "mahler_scale",
    "torus_basis_product",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    return p


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: the integers (``p is None``) or the prime field F_p."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            check_prime(self.p)

    @property
    def is_field(self) -> bool:
        return self.p is not None

    def reduce(self, n: int) -> int:
        return n % self.p if self.p is not None else n

    def to_json(self):
        return "Z" if self.p is None else {"Fp": self.p}

    @classmethod
    def from_json(cls, obj) -> "Ring":
        if obj == "Z":
            return ZZ
        if isinstance(obj, dict) and set(obj) == {"Fp"}:
            return cls(int(obj["Fp"]))
        raise ValueError(f"bad ring tag {obj!r}")

    def __str__(self):
        return "Z" if self.p is None else f"F_{self.p}"


ZZ = Ring()


def Fp(p: int) -> Ring:
    return Ring(p)


def binom(n: int, k: int) -> int:
    """n(n-1)...(n-k+1)/k! for any integer n and k >= 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if n >= 0:
        return math.comb(n, k)
    # binom(-m, k) = (-1)^k binom(m + k - 1, k)
    v = math.comb(-n + k - 1, k)
    return -v if k % 2 else v


def binom_mod_p(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p via base-p digits (Lucas); negative n by reflection."""
    check_prime(p)
    if k < 0:
        raise ValueError("k must be nonnegative")
    sign = 1
    if n < 0:
        n = -n + k - 1
        sign = -1 if k % 2 else 1
    result = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        result = result * math.comb(nd, kd) % p
        n //= p
        k //= p
    return sign * result % p


def _clean(d: Dict[int, int]) -> Dict[int, int]:
    return {k: v for k, v in d.items() if v}


@lru_cache(maxsize=None)
def _vandermonde(m: int, r: int):
    return tuple((k, binom(m, r - k)) for k in range(r, -1, -1) if binom(m, r - k))


def vandermonde_shift(m: int, r: int) -> Dict[int, int]:
    """Coefficients of binom(X + m, r) in the basis binom(X, k)."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return dict(_vandermonde(m, r))


@lru_cache(maxsize=None)
def _mahler(c: int, j: int):
    out = []
    values = [binom(c * i, j) for i in range(j + 1)]
    for k in range(j + 1):
        d = sum((-1) ** (k - i) * math.comb(k, i) * values[i] for i in range(k + 1))
        if d:
            out.append((k, d))
    return tuple(out)


def mahler_scale(c: int, j: int) -> Dict[int, int]:
    """Coefficients d_k with binom(c X, j) = sum_k d_k binom(X, k).

    The d_k are the forward differences at 0 of the integer-valued
    polynomial X -> binom(cX, j), hence exact integers supported on [0, j].
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    return dict(_mahler(c, j))


@lru_cache(maxsize=None)
def _basis_product(r: int, s: int):
    if r < s:
        r, s = s, r
    out = []
    for i in range(s + 1):
        coef = math.comb(r + s - i, s) * math.comb(s, i)
        out.append((r + s - i, coef))
    return tuple(out)


def torus_basis_product(r: int, s: int) -> Dict[int, int]:
    """Coefficients of binom(X, r) * binom(X, s) in the basis binom(X, t)."""
    if r < 0 or s < 0:
        raise ValueError("r, s must be nonnegative")
    return dict(_basis_product(r, s))
