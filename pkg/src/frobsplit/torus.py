"""Dist(T) in the basis binom(H, b) = prod_i binom(H_i, b_i).

Elements are immutable sparse maps from multi-indices to nonzero
coefficients, over Z or F_p.  Products use the structure constants of
:func:`frobsplit.arith.torus_basis_product`; :meth:`TorusElement.eval` is the
independent pointwise oracle.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .arith import (
    Ring,
    ZZ,
    binom,
    check_prime,
    mahler_scale,
    torus_basis_product,
    vandermonde_shift,
)
from .report import VerificationReport

Index = Tuple[int, ...]


class TorusElement:
    __slots__ = ("rank", "ring", "terms", "_hash")

    def __init__(self, rank: int, ring: Ring = ZZ, terms: Optional[Dict[Index, int]] = None):
        self.rank = rank
        self.ring = ring
        clean = {}
        for b, v in (terms or {}).items():
            b = tuple(b)
            if len(b) != rank:
                raise ValueError(f"multi-index {b} has length != {rank}")
            if any(x < 0 for x in b):
                raise ValueError(f"negative multi-index {b}")
            v = ring.reduce(v)
            if v:
                clean[b] = v
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, rank, ring, terms):
        # terms already reduced and zero-free
        obj = cls.__new__(cls)
        obj.rank, obj.ring, obj.terms, obj._hash = rank, ring, terms, None
        return obj

    # ---- constructors
    @classmethod
    def zero(cls, rank: int, ring: Ring = ZZ) -> "TorusElement":
        return cls._raw(rank, ring, {})

    @classmethod
    def one(cls, rank: int, ring: Ring = ZZ) -> "TorusElement":
        return cls._raw(rank, ring, {(0,) * rank: 1})

    @classmethod
    def monomial(cls, b: Sequence[int], ring: Ring = ZZ, coef: int = 1) -> "TorusElement":
        return cls(len(b), ring, {tuple(b): coef})

    # ---- arithmetic
    def _check(self, other: "TorusElement"):
        if self.rank != other.rank or self.ring != other.ring:
            raise ValueError(
                f"rank/ring mismatch: ({self.rank}, {self.ring}) vs ({other.rank}, {other.ring})"
            )

    def _combine(self, other, sign):
        self._check(other)
        out = dict(self.terms)
        for b, v in other.terms.items():
            w = self.ring.reduce(out.get(b, 0) + sign * v)
            if w:
                out[b] = w
            else:
                out.pop(b, None)
        return TorusElement._raw(self.rank, self.ring, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k: int) -> "TorusElement":
        k = self.ring.reduce(k)
        if not k:
            return TorusElement.zero(self.rank, self.ring)
        out = {}
        for b, v in self.terms.items():
            w = self.ring.reduce(v * k)
            if w:
                out[b] = w
        return TorusElement._raw(self.rank, self.ring, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        acc: Dict[Index, int] = {}
        for b1, v1 in self.terms.items():
            for b2, v2 in other.terms.items():
                v = v1 * v2
                for b, c in _monomial_product(b1, b2):
                    acc[b] = acc.get(b, 0) + v * c
        return TorusElement(self.rank, self.ring, acc)

    def __rmul__(self, k):
        if isinstance(k, int):
            return self.scale(k)
        return NotImplemented

    def __pow__(self, n: int):
        out = TorusElement.one(self.rank, self.ring)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.rank == other.rank and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"TorusElement(0 over {self.ring})"
        parts = [f"{v}*C{list(b)}" for b, v in sorted(self.terms.items())]
        return f"TorusElement({' + '.join(parts)} over {self.ring})"

    # ---- structure
    def shift(self, s: Sequence[int]) -> "TorusElement":
        """Substitute H_i -> H_i + s_i."""
        s = tuple(s)
        if not any(s):
            return self
        acc: Dict[Index, int] = {}
        for b, v in self.terms.items():
            for bb, c in _shifted_monomial(b, s):
                acc[bb] = acc.get(bb, 0) + v * c
        return TorusElement(self.rank, self.ring, acc)

    def eval(self, h: Sequence[int]) -> int:
        """binom(H, b) -> prod_i binom(h_i, b_i), extended linearly."""
        total = 0
        for b, v in self.terms.items():
            t = v
            for hi, bi in zip(h, b):
                t *= binom(hi, bi)
                if not t:
                    break
            total += t
        return self.ring.reduce(total)

    def reduce(self, p: int) -> "TorusElement":
        return TorusElement(self.rank, Ring(p), self.terms)

    def max_index(self) -> int:
        return max((max(b, default=0) for b in self.terms), default=0)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "rank": self.rank,
            "terms": [{"b": list(b), "coef": str(v)} for b, v in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, obj) -> "TorusElement":
        ring = Ring.from_json(obj["ring"])
        terms: Dict[Index, int] = {}
        for t in obj["terms"]:
            b = tuple(int(x) for x in t["b"])
            terms[b] = terms.get(b, 0) + int(t["coef"])
        return cls(int(obj["rank"]), ring, terms)


@lru_cache(maxsize=None)
def _monomial_product(b1: Index, b2: Index) -> Tuple[Tuple[Index, int], ...]:
    per_coord = [tuple(torus_basis_product(r, s).items()) for r, s in zip(b1, b2)]
    out = []
    for combo in itertools.product(*per_coord):
        c = 1
        for _, v in combo:
            c *= v
        out.append((tuple(t for t, _ in combo), c))
    return tuple(out)


@lru_cache(maxsize=None)
def _shifted_monomial(b: Index, s: Index) -> Tuple[Tuple[Index, int], ...]:
    per_coord = [tuple(vandermonde_shift(si, bi).items()) for bi, si in zip(b, s)]
    out = []
    for combo in itertools.product(*per_coord):
        c = 1
        for _, v in combo:
            c *= v
        out.append((tuple(t for t, _ in combo), c))
    return tuple(out)


# --------------------------------------------------------------------------


def mu0(p: int, rank: int) -> TorusElement:
    """prod_i binom(H_i - 1, p - 1) over F_p."""
    check_prime(p)
    return _mu0(p, rank)


@lru_cache(maxsize=None)
def _mu0(p, rank):
    ring = Ring(p)
    one_coord = [(k, v % p) for k, v in vandermonde_shift(-1, p - 1).items() if v % p]
    terms = {}
    for combo in itertools.product(one_coord, repeat=rank):
        c = 1
        for _, v in combo:
            c *= v
        terms[tuple(k for k, _ in combo)] = c
    return TorusElement(rank, ring, terms)


@lru_cache(maxsize=None)
def _lincomb_z(c: Index, m: int, r: int) -> Tuple[Tuple[Index, int], ...]:
    rank = len(c)
    active = [i for i in range(rank) if c[i]]
    acc: Dict[Index, int] = {}

    def rec(pos, remaining, coef, idx):
        if pos == len(active):
            # the constant m absorbs what is left
            v = coef * binom(m, remaining)
            if v:
                key = tuple(idx)
                acc[key] = acc.get(key, 0) + v
            return
        i = active[pos]
        for j in range(remaining + 1):
            for k, d in mahler_scale(c[i], j).items():
                idx[i] = k
                rec(pos + 1, remaining - j, coef * d, idx)
        idx[i] = 0

    rec(0, r, 1, [0] * rank)
    return tuple((b, v) for b, v in acc.items() if v)


def lincomb_binom(c: Sequence[int], m: int, r: int, ring: Ring = ZZ) -> TorusElement:
    """binom(sum_i c_i H_i + m, r) expanded in the basis binom(H, b)."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    c = tuple(int(x) for x in c)
    return TorusElement(len(c), ring, dict(_lincomb_z(c, int(m), int(r))))


def coordinate_binom(rank: int, i: int, a: int, c: int, b: int, ring: Ring = ZZ) -> TorusElement:
    """binom(a H_i + c, b)."""
    vec = [0] * rank
    vec[i] = a
    return lincomb_binom(vec, c, b, ring)


def _require_fp(x: TorusElement) -> int:
    if x.ring.p is None:
        raise ValueError("operation is only defined over F_p")
    return x.ring.p


@lru_cache(maxsize=None)
def _phi0_monomial(b: Index, p: int) -> TorusElement:
    return TorusElement.monomial(tuple(p * x for x in b), Ring(p)) * _mu0(p, len(b))


def phi0(x: TorusElement) -> TorusElement:
    """binom(H, b) -> binom(H, p b) mu0, extended linearly."""
    p = _require_fp(x)
    out = TorusElement.zero(x.rank, x.ring)
    for b, v in x.terms.items():
        out = out + _phi0_monomial(b, p).scale(v)
    return out


def frobenius_torus(x: TorusElement) -> TorusElement:
    """binom(H, b) -> binom(H, b/p) when p divides every b_i, else 0."""
    p = _require_fp(x)
    terms = {tuple(bi // p for bi in b): v for b, v in x.terms.items() if all(bi % p == 0 for bi in b)}
    return TorusElement(x.rank, x.ring, terms)


def monomials(rank: int, total_degree: int) -> Iterable[Index]:
    """All b in N^rank with |b| <= total_degree, in lexicographic order."""
    for b in itertools.product(range(total_degree + 1), repeat=rank):
        if sum(b) <= total_degree:
            yield b


# --------------------------------------------------------------------------


def certifying_window(p: int, b: int) -> int:
    """Number of consecutive integer parameters that certifies one of the
    torus identities for *all* integers.

    Each coefficient of either side is an integer-valued polynomial in the
    parameter of degree <= p*b; such a polynomial vanishing mod p at p*b + 1
    consecutive integers has all Mahler coefficients divisible by p (the
    transform is unitriangular over Z), hence vanishes mod p everywhere.
    """
    return p * b + 1


def verify_torus_identities(
    p: int,
    rank: int,
    a_range: Sequence[int] = range(-6, 7),
    c_range: Sequence[int] = range(-6, 7),
    b_max: Optional[int] = None,
    which: Sequence[str] = ("i", "ii", "iii"),
) -> VerificationReport:
    """Exhaustive check of the three torus identities

    (i)   binom(a H_i, b) mu0 == 0 unless p | b
    (ii)  phi0 binom(a H_i, b) == binom(a H_i, p b) mu0
    (iii) phi0 binom(H_i + c, b) == binom(H_i + p c, p b) mu0

    as equalities of canonical elements over F_p.
    """
    check_prime(p)
    if b_max is None:
        b_max = 3 * p + 2
    a_range, c_range = list(a_range), list(c_range)
    ring = Ring(p)
    m0 = mu0(p, rank)
    rep = VerificationReport(
        "verify.torus_identities",
        {"p": p, "rank": rank, "a_range": [min(a_range), max(a_range)] if a_range else [],
         "c_range": [min(c_range), max(c_range)] if c_range else [], "b_max": b_max, "which": list(which)},
    )
    with rep.timed():
        for i in range(rank):
            for b in range(b_max + 1):
                if "i" in which and b % p:
                    for a in a_range:
                        rep.tick()
                        if coordinate_binom(rank, i, a, 0, b, ring) * m0:
                            rep.record(identity="i", i=i, a=a, b=b)
                if "ii" in which:
                    for a in a_range:
                        rep.tick()
                        lhs = phi0(coordinate_binom(rank, i, a, 0, b, ring))
                        rhs = coordinate_binom(rank, i, a, 0, p * b, ring) * m0
                        if lhs != rhs:
                            rep.record(identity="ii", i=i, a=a, b=b)
                if "iii" in which:
                    for c in c_range:
                        rep.tick()
                        lhs = phi0(coordinate_binom(rank, i, 1, c, b, ring))
                        rhs = coordinate_binom(rank, i, 1, p * c, p * b, ring) * m0
                        if lhs != rhs:
                            rep.record(identity="iii", i=i, c=c, b=b)
        window = min(len(a_range) if "i" in which or "ii" in which else 10**9,
                     len(c_range) if "iii" in which else 10**9)
        rep.details["certified_b_max"] = max(
            (b for b in range(b_max + 1) if certifying_window(p, b) <= window), default=None
        )
        rep.details["window_note"] = (
            "parameters a, c range over a finite window; for b <= certified_b_max the window "
            "has >= p*b+1 consecutive integers, which certifies the identity for all integers"
        )
    return rep


def _grid_values(x: TorusElement, n: int):
    """Exact values of x on [0, n)^rank from a table of plain binomials."""
    table = np.array([[binom(h, b) for b in range(n)] for h in range(n)], dtype=object)
    vals = np.zeros((n,) * x.rank, dtype=object)
    for b, v in x.terms.items():
        if max(b, default=0) >= n:
            cols = [np.array([binom(h, bi) for h in range(n)], dtype=object) for bi in b]
        else:
            cols = [table[:, bi] for bi in b]
        term = np.array(v, dtype=object)
        for col in cols:
            term = np.multiply.outer(term, col)
        vals = vals + term
    return vals


def random_element(rng, rank: int, ring: Ring, max_index: int, max_terms: int = 4) -> TorusElement:
    k = int(rng.integers(1, max_terms + 1))
    terms = {}
    for _ in range(k):
        b = tuple(int(v) for v in rng.integers(0, max_index + 1, size=rank))
        terms[b] = int(rng.integers(-5, 6))
    return TorusElement(rank, ring, terms)


def verify_pointwise(
    p: int,
    rank: int,
    trials: int = 1000,
    seed: int = 0,
    max_index: Optional[int] = None,
) -> VerificationReport:
    """Structure-constant products against pointwise evaluation on [0, p^3)^rank.

    Pairs are drawn over Z and over F_p; over Z values must agree exactly, over
    F_p they must agree mod p (a function on the grid determines the element
    when every index is below p^3).
    """
    check_prime(p)
    n = p ** 3
    max_index = max_index if max_index is not None else n // 2
    rng = np.random.default_rng(seed)
    rep = VerificationReport("verify.torus_oracle", {"p": p, "rank": rank, "grid": n,
                                                     "max_index": max_index}, seed=seed)
    with rep.timed():
        for k in range(trials):
            ring = ZZ if k % 2 == 0 else Ring(p)
            x = random_element(rng, rank, ring, max_index)
            y = random_element(rng, rank, ring, max_index)
            rep.tick()
            got = _grid_values(x * y, n)
            want = _grid_values(x, n) * _grid_values(y, n)
            if ring.p is not None:
                got, want = got % p, want % p
            if not np.array_equal(got, want):
                rep.record(trial=k, ring=ring.to_json(), x=x.to_json(), y=y.to_json())
    return rep
