"""The projection Dist(T^) -> Dist(T) induced by a z-extension, and its
compatibility with mu0 and phi."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .arith import Ring, check_prime
from .hyperalg import Hyperalgebra, PbwElement, default_period, pbw_monomials
from .periodic import PeriodicTorus
from .report import VerificationReport
from .rootdata import LatticeMorphism, RootDatum, z_extend
from .torus import TorusElement, frobenius_torus, monomials, mu0, phi0


@dataclass(frozen=True)
class TorusProjection:
    source_rank: int
    target_rank: int
    kill: Tuple[int, ...]
    keep: Tuple[Tuple[int, int], ...]  # (source index, target index)

    @classmethod
    def from_morphism(cls, mor: LatticeMorphism) -> "TorusProjection":
        """Read kill/keep sets off a 0/1 coordinate projection matrix."""
        kill, keep = [], []
        for j in range(mor.source_rank):
            col = [mor.matrix[i][j] for i in range(mor.target_rank)]
            if not any(col):
                kill.append(j)
            elif sorted(col) == [0] * (len(col) - 1) + [1]:
                keep.append((j, col.index(1)))
            else:
                raise ValueError(f"column {j} is not a coordinate projection: {col}")
        if sorted(t for _, t in keep) != list(range(mor.target_rank)):
            raise ValueError("kept coordinates do not biject onto the target")
        return cls(mor.source_rank, mor.target_rank, tuple(kill), tuple(keep))

    def project_index(self, b) -> Optional[Tuple[int, ...]]:
        if any(b[j] for j in self.kill):
            return None
        out = [0] * self.target_rank
        for j, i in self.keep:
            out[i] = b[j]
        return tuple(out)

    def project_weight(self, lam) -> Tuple[int, ...]:
        out = [0] * self.target_rank
        for j, i in self.keep:
            out[i] = lam[j]
        return tuple(out)


def dist_pi_hat(proj: TorusProjection, x: TorusElement) -> TorusElement:
    """binom(H^_i, b) -> binom(H_keep(i), b) for kept i; binom(H^_j, b) -> δ_{b,0} for killed j."""
    if x.rank != proj.source_rank:
        raise ValueError(f"rank {x.rank} != projection source rank {proj.source_rank}")
    terms: Dict[Tuple[int, ...], int] = {}
    for b, v in x.terms.items():
        bb = proj.project_index(b)
        if bb is not None:
            terms[bb] = terms.get(bb, 0) + v
    return TorusElement(proj.target_rank, x.ring, terms)


def dist_pi_hat_table(proj: TorusProjection, t: PeriodicTorus) -> PeriodicTorus:
    """Same map on value tables: restrict to killed coordinates = 0."""
    if t.rank != proj.source_rank:
        raise ValueError("rank mismatch")
    idx = [slice(None)] * t.rank
    for j in proj.kill:
        idx[j] = 0
    vals = t.values[tuple(idx)]
    # remaining axes are in source order; put them in target order
    order = [i for _, i in sorted(proj.keep)]
    vals = np.transpose(vals, np.argsort(order))
    return PeriodicTorus(t.p, t.period, vals)


def project_pbw(proj: TorusProjection, x: PbwElement, target: Hyperalgebra) -> PbwElement:
    """E, F map to E, F (the kernel is central); torus parts via dist_pi_hat."""
    if x.alg.p is None:
        return target.element({k: dist_pi_hat(proj, t) for k, t in x.blocks.items()})
    return target.element({k: dist_pi_hat_table(proj, t) for k, t in x.blocks.items()})


def verify_compat(
    proj: TorusProjection,
    p: int,
    deg_bound: int,
    ext: Optional[RootDatum] = None,
    base: Optional[RootDatum] = None,
) -> VerificationReport:
    """Dist(π^)(mu0^) == mu0 and Dist(π^) o phi0^ == phi0 o Dist(π^) on every
    torus monomial with |b^| <= deg_bound; homomorphism and Frobenius
    compatibility on monomial pairs.  With ``ext``/``base`` data the same
    square is checked on PBW monomials of the rank-one slice."""
    check_prime(p)
    ring = Ring(p)
    rep = VerificationReport(
        "verify.compat",
        {"source_rank": proj.source_rank, "target_rank": proj.target_rank, "p": p,
         "deg_bound": deg_bound, "datum": base.name if base else None},
    )
    with rep.timed():
        rep.tick()
        if dist_pi_hat(proj, mu0(p, proj.source_rank)) != mu0(p, proj.target_rank):
            rep.record(part="mu0")
        mons = list(monomials(proj.source_rank, deg_bound))
        for b in mons:
            rep.tick()
            x = TorusElement.monomial(b, ring)
            if dist_pi_hat(proj, phi0(x)) != phi0(dist_pi_hat(proj, x)):
                rep.record(part="phi", b=list(b))
        for b1 in mons:
            x1 = TorusElement.monomial(b1, ring)
            for b2 in mons:
                x2 = TorusElement.monomial(b2, ring)
                rep.tick()
                if dist_pi_hat(proj, x1 * x2) != dist_pi_hat(proj, x1) * dist_pi_hat(proj, x2):
                    rep.record(part="homomorphism", b1=list(b1), b2=list(b2))
            rep.tick()
            if dist_pi_hat(proj, frobenius_torus(x1)) != frobenius_torus(dist_pi_hat(proj, x1)):
                rep.record(part="frobenius", b=list(b1))
        if ext is not None and base is not None:
            period = default_period(p, deg_bound)
            src = Hyperalgebra(ext, p=p, period=period)
            tgt = Hyperalgebra(base, p=p, period=period)
            for a, b, c in pbw_monomials(proj.source_rank, deg_bound):
                rep.tick()
                x = src.monomial(a, b, c)
                if project_pbw(proj, src.phi(x), tgt) != tgt.phi(project_pbw(proj, x, tgt)):
                    rep.record(part="slice_phi", x=[a, list(b), c])
    return rep


def compat_for(rd: RootDatum, p: int, deg_bound: int, with_slice: bool = True) -> VerificationReport:
    ext, mor = z_extend(rd)
    proj = TorusProjection.from_morphism(mor)
    if with_slice and rd.semisimple_rank == 1:
        return verify_compat(proj, p, deg_bound, ext, rd)
    return verify_compat(proj, p, deg_bound)
