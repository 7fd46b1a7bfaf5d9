"""Root data as explicit integer lattices, and the z-extension.

A datum lives on X = Y = Z^rank in dual coordinates; the pairing is the dot
product.  Roots are character vectors, coroots cocharacter vectors, and the
i-th root is paired with the i-th coroot.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .report import VerificationReport

Vec = Tuple[int, ...]

DATA_DIR = Path(__file__).parent / "data"


class MalformedDatum(ValueError):
    """Input that is not even shaped like a root datum."""


def dot(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


# --------------------------------------------------------------------------
# integer / rational linear algebra


def smith_diagonal(A: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero elementary divisors of an integer matrix, in divisibility order."""
    M = [list(map(int, row)) for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nonzero = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not nonzero:
            break
        while True:
            _, i0, j0 = min((abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j])
            M[t], M[i0] = M[i0], M[t]
            for row in M:
                row[t], row[j0] = row[j0], row[t]
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = M[i][t] // piv
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                dirty |= M[i][t] != 0
            for j in range(t + 1, n):
                q = M[t][j] // piv
                if q:
                    for row in M:
                        row[j] -= q * row[t]
                dirty |= M[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % piv), None)
            if bad is not None:
                M[t] = [a + b for a, b in zip(M[t], M[bad])]
                continue
            break
        diag.append(abs(M[t][t]))
        t += 1
    return diag


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(smith_diagonal(rows)) if rows else 0


def solve_rational(basis: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[List[Fraction]]:
    """Coefficients x with sum_k x_k basis[k] == target, or None.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    n = len(target)
    # augmented system: columns are basis vectors
    rows = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][k]
    return x


def _det(P: Sequence[Sequence[int]]) -> int:
    n = len(P)
    if n == 1:
        return P[0][0]
    if n == 2:
        return P[0][0] * P[1][1] - P[0][1] * P[1][0]
    return sum((-1) ** j * P[0][j] * _det([row[:j] + row[j + 1:] for row in P[1:]]) for j in range(n))


def _adjugate(P):
    n = len(P)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(P) if k != i]
            adj[j][i] = (-1) ** (i + j) * _det(minor)
    return adj


def unimodular_inverse(P):
    d = _det(P)
    if d not in (1, -1):
        raise ValueError("matrix is not in GL(Z)")
    return [[d * v for v in row] for row in _adjugate(P)]


def matvec(P, v) -> Vec:
    return tuple(dot(row, v) for row in P)


def transpose(P):
    return [list(col) for col in zip(*P)]


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RootDatum:
    name: str
    rank: int
    roots: Tuple[Vec, ...]
    coroots: Tuple[Vec, ...]
    simple_indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(int(x) for x in r) for r in self.roots))
        object.__setattr__(self, "coroots", tuple(tuple(int(x) for x in r) for r in self.coroots))
        object.__setattr__(self, "simple_indices", tuple(int(i) for i in self.simple_indices))

    # ---- shape
    def shape_errors(self) -> List[str]:
        errs = []
        if len(self.roots) != len(self.coroots):
            errs.append(f"{len(self.roots)} roots but {len(self.coroots)} coroots")
        for kind, vecs in (("root", self.roots), ("coroot", self.coroots)):
            for i, v in enumerate(vecs):
                if len(v) != self.rank:
                    errs.append(f"{kind} {i} has length {len(v)} != rank {self.rank}")
        for i in self.simple_indices:
            if not 0 <= i < len(self.roots):
                errs.append(f"simple index {i} out of range")
        if len(set(self.simple_indices)) != len(self.simple_indices):
            errs.append("repeated simple index")
        return errs

    # ---- accessors
    @property
    def simple_roots(self) -> List[Vec]:
        return [self.roots[i] for i in self.simple_indices]

    @property
    def simple_coroots(self) -> List[Vec]:
        return [self.coroots[i] for i in self.simple_indices]

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_indices)

    def simple_coordinates(self, k: int) -> Optional[List[Fraction]]:
        return solve_rational(self.simple_roots, self.roots[k])

    def positive_indices(self) -> List[int]:
        out = []
        for k in range(len(self.roots)):
            x = self.simple_coordinates(k)
            if x is not None and all(v >= 0 for v in x):
                out.append(k)
        return out

    def cartan_matrix(self) -> List[List[int]]:
        return [[dot(a, c) for c in self.simple_coroots] for a in self.simple_roots]

    # ---- serialization
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "coroots": [list(r) for r in self.coroots],
            "simple_indices": list(self.simple_indices),
        }

    @classmethod
    def from_json(cls, obj) -> "RootDatum":
        try:
            rd = cls(
                name=str(obj["name"]),
                rank=int(obj["rank"]),
                roots=obj["roots"],
                coroots=obj["coroots"],
                simple_indices=obj["simple_indices"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDatum(f"malformed root datum: {exc}") from exc
        return rd

    @classmethod
    def load(cls, path) -> "RootDatum":
        with open(resolve_datum_path(path), encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedDatum(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_json(obj)

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)


def resolve_datum_path(path) -> Path:
    """Look a datum file up as given, then in $FROBSPLIT_CORPUS, then in the
    shipped corpus."""
    p = Path(path)
    candidates = [p]
    corpus = os.environ.get("FROBSPLIT_CORPUS")
    if corpus:
        candidates.append(Path(corpus) / p.name)
    candidates.append(DATA_DIR / p.name)
    if not p.suffix:
        candidates.append(DATA_DIR / (p.name + ".json"))
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"unknown datum file {path}")


def load_corpus(name: str) -> RootDatum:
    """Shipped datum by short name, e.g. ``load_corpus("pgl2")``."""
    return RootDatum.load(DATA_DIR / f"{name}.json")


# --------------------------------------------------------------------------


def validate(rd: RootDatum) -> VerificationReport:
    rep = VerificationReport("rootdatum.validate", {"name": rd.name, "rank": rd.rank})
    with rep.timed():
        errs = rd.shape_errors()
        if errs:
            rep.details["malformed"] = True
            for e in errs:
                rep.record(axiom="malformed", detail=e)
            return rep
        rep.details["malformed"] = False
        index = {r: k for k, r in enumerate(rd.roots)}
        if len(index) != len(rd.roots):
            rep.record(axiom="distinct_roots")
        for k, (a, c) in enumerate(zip(rd.roots, rd.coroots)):
            rep.tick()
            if dot(a, c) != 2:
                rep.record(axiom="pairing_two", index=k, value=dot(a, c))
        for i, (ai, ci) in enumerate(zip(rd.roots, rd.coroots)):
            for j, (aj, cj) in enumerate(zip(rd.roots, rd.coroots)):
                rep.tick()
                s_root = tuple(x - dot(aj, ci) * y for x, y in zip(aj, ai))
                s_coroot = tuple(x - dot(ai, cj) * y for x, y in zip(cj, ci))
                k = index.get(s_root)
                if k is None:
                    rep.record(axiom="reflection_roots", reflection=i, root=j)
                elif rd.coroots[k] != s_coroot:
                    rep.record(axiom="reflection_coroots", reflection=i, root=j)
        simple = rd.simple_roots
        if rational_rank(simple) != len(simple):
            rep.record(axiom="simple_independent")
            return rep
        for k in range(len(rd.roots)):
            rep.tick()
            x = rd.simple_coordinates(k)
            if x is None or any(v.denominator != 1 for v in x):
                rep.record(axiom="base_span", root=k)
            elif not (all(v >= 0 for v in x) or all(v <= 0 for v in x)):
                rep.record(axiom="base_sign", root=k)
    return rep


def is_valid(rd: RootDatum) -> bool:
    return validate(rd).passed


def is_derived_simply_connected(rd: RootDatum) -> bool:
    """Y ∩ QΦ^∨ == ZΦ^∨, i.e. the coroot lattice is saturated in Y."""
    if not rd.coroots:
        return True
    return all(d == 1 for d in smith_diagonal(rd.coroots))


@dataclass(frozen=True)
class LatticeMorphism:
    """Integer matrix (target_rank x source_rank) acting on cocharacters."""

    matrix: Tuple[Vec, ...]

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    @property
    def source_rank(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def __call__(self, y: Sequence[int]) -> Vec:
        return matvec(self.matrix, y)

    def pullback(self, x: Sequence[int]) -> Vec:
        """Transpose action on characters."""
        return matvec(transpose(self.matrix), x)

    def is_surjective(self) -> bool:
        divs = smith_diagonal(self.matrix)
        return len(divs) == self.target_rank and all(d == 1 for d in divs)

    def to_json(self):
        return [list(r) for r in self.matrix]


def z_extend_checks(rd: RootDatum, ext: RootDatum, mor: LatticeMorphism) -> VerificationReport:
    rep = VerificationReport("rootdatum.z_extend", {"name": rd.name})
    inner = validate(ext)
    rep.tick()
    if not inner.passed:
        rep.record(check="valid", failures=inner.failures)
    rep.tick()
    if not is_derived_simply_connected(ext):
        rep.record(check="derived_simply_connected")
    rep.tick()
    if not mor.is_surjective():
        rep.record(check="surjective", elementary_divisors=smith_diagonal(mor.matrix))
    for k, (a, c) in enumerate(zip(ext.roots, ext.coroots)):
        rep.tick()
        if mor(c) != rd.coroots[k]:
            rep.record(check="coroot_image", index=k)
        if mor.pullback(rd.roots[k]) != a:
            rep.record(check="root_pullback", index=k)
    return rep


def z_extend(rd: RootDatum) -> Tuple[RootDatum, LatticeMorphism]:
    """:func:`z_extension_data` followed by its postcondition checks; raises
    AssertionError if any of them fails."""
    ext, mor = z_extension_data(rd)
    checks = z_extend_checks(rd, ext, mor)
    if not checks.passed:
        raise AssertionError(f"z_extend postconditions failed: {checks.failures}")
    return ext, mor


def z_extension_data(rd: RootDatum) -> Tuple[RootDatum, LatticeMorphism]:
    """Central extension with simply connected derived group and surjective
    cocharacter map.

    Y^ = Y^sc ⊕ Y with Y^sc spanned by the simple coroots; X^ = X^sc ⊕ X with
    X^sc the dual fundamental-weight lattice.  Roots become (0, α), coroots
    (α^∨ in simple-coroot coordinates, α^∨), and the projection Y^ -> Y
    forgets the first block.
    """
    rep = validate(rd)
    if not rep.passed:
        raise ValueError(f"invalid root datum {rd.name}: {rep.failures[:3]}")
    s = rd.semisimple_rank
    simple_co = rd.simple_coroots
    roots, coroots = [], []
    for a, c in zip(rd.roots, rd.coroots):
        coords = solve_rational(simple_co, c)
        if coords is None or any(v.denominator != 1 for v in coords):
            raise ValueError("coroot not in the simple-coroot lattice")
        roots.append((0,) * s + a)
        coroots.append(tuple(int(v) for v in coords) + c)
    ext = RootDatum(
        name=f"{rd.name}^z",
        rank=s + rd.rank,
        roots=tuple(roots),
        coroots=tuple(coroots),
        simple_indices=rd.simple_indices,
    )
    mor = LatticeMorphism(
        tuple(tuple([0] * s + [1 if j == i else 0 for j in range(rd.rank)]) for i in range(rd.rank))
    )
    return ext, mor


def _value_order(bound: int) -> List[int]:
    out = [0]
    for v in range(1, bound + 1):
        out += [v, -v]
    return out


def _check_iso(rd1: RootDatum, rd2: RootDatum, P, Pinv_T) -> bool:
    co2 = {c: k for k, c in enumerate(rd2.coroots)}
    seen = set()
    for a, c in zip(rd1.roots, rd1.coroots):
        k = co2.get(matvec(P, c))
        if k is None or k in seen:
            return False
        seen.add(k)
        if matvec(Pinv_T, a) != rd2.roots[k]:
            return False
    return len(seen) == len(rd2.coroots)


def find_isomorphism(rd1: RootDatum, rd2: RootDatum, bound: int):
    """Bounded search for P in GL(Z) with P(coroots1) = coroots2 and
    P^{-T}(roots1) = roots2, compatibly.

    Candidates are tried by increasing max-entry, then lexicographically with
    entries ordered 0, 1, -1, 2, -2, ...  Returns ``(P, P^{-T})`` or None; None
    only means nothing was found within ``bound``.
    """
    if rd1.rank != rd2.rank:
        raise ValueError("ranks differ")
    if len(rd1.roots) != len(rd2.roots):
        return None
    n = rd1.rank
    for level in range(bound + 1):
        vals = _value_order(level)
        for entries in itertools.product(vals, repeat=n * n):
            if max((abs(e) for e in entries), default=0) != level:
                continue
            P = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
            if _det(P) not in (1, -1):
                continue
            Pinv_T = transpose(unimodular_inverse(P))
            if _check_iso(rd1, rd2, P, Pinv_T):
                return P, Pinv_T
    return None


def rank_one_data(rd: RootDatum) -> Tuple[Vec, Vec]:
    """(α(H_i))_i and (c_i)_i for the unique simple root of a semisimple-rank-1 datum."""
    if rd.semisimple_rank != 1:
        raise ValueError(f"{rd.name} has semisimple rank {rd.semisimple_rank}, need 1")
    k = rd.simple_indices[0]
    return rd.roots[k], rd.coroots[k]


