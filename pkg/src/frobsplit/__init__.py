"""Exact computations with distribution algebras of reductive groups in
semisimple rank one: the Frobenius splitting phi, its torus projector mu0,
z-extensions of root data, and Frobenius contraction of weight modules."""

from .arith import ZZ, Fp, Ring, binom, binom_mod_p
from .compat import TorusProjection, compat_for, dist_pi_hat, verify_compat
from .hyperalg import Hyperalgebra, PbwElement, RankOne, verify_borel, verify_theorem
from .modules import (
    WeightModule,
    character,
    contract,
    decompose_character,
    frobenius_twist,
    g1_invariants,
    k_invariants,
    tensor,
    validate_module,
    weyl_module,
)
from .periodic import PeriodicTorus
from .report import VerificationReport
from .rootdata import RootDatum, find_isomorphism, load_corpus, validate, z_extend
from .torus import TorusElement, mu0, phi0, verify_torus_identities

__version__ = "0.1.0"

__all__ = [
    "ZZ",
    "Fp",
    "Ring",
    "binom",
    "binom_mod_p",
    "TorusProjection",
    "compat_for",
    "dist_pi_hat",
    "verify_compat",
    "Hyperalgebra",
    "PbwElement",
    "RankOne",
    "verify_borel",
    "verify_theorem",
    "WeightModule",
    "character",
    "contract",
    "decompose_character",
    "frobenius_twist",
    "g1_invariants",
    "k_invariants",
    "tensor",
    "validate_module",
    "weyl_module",
    "PeriodicTorus",
    "VerificationReport",
    "RootDatum",
    "find_isomorphism",
    "load_corpus",
    "validate",
    "z_extend",
    "TorusElement",
    "mu0",
    "phi0",
    "verify_torus_identities",
]
