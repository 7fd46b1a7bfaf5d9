"""Command-line driver: every check writes one JSON report.

Exit status: 0 when every check passes, 1 when a counterexample was found,
2 on usage or input errors (unknown datum, malformed JSON, non-prime p).
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, List, Optional, Sequence

from .arith import check_prime
from .compat import compat_for
from .hyperalg import (
    Hyperalgebra,
    default_period,
    verify_associativity,
    verify_borel,
    verify_mu0,
    verify_theorem,
)
from .modules import (
    RankOne,
    WeightModule,
    contract,
    reduce_module,
    validate_module,
    verify_characters,
    verify_donkin,
    verify_kinv,
    verify_matrix_oracle,
    verify_roundtrip,
    weight_with_pairing,
    weyl_corpus,
    weyl_module,
)
from .report import VerificationReport
from .rootdata import (
    MalformedDatum,
    RootDatum,
    find_isomorphism,
    validate,
    z_extend_checks,
    z_extension_data,
)
from .torus import verify_pointwise, verify_torus_identities

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


def _primes(text: str) -> List[int]:
    out = _ints(text)
    for p in out:
        try:
            check_prime(p)
        except ValueError:
            raise UsageError(f"p must be prime (got {p})")
    return out


def _data(text: str) -> List[RootDatum]:
    return [RootDatum.load(x.strip()) for x in str(text).split(",") if x.strip()]


# --------------------------------------------------------------------------
# jobs: module-level so that --jobs can ship them to worker processes


def job_validate(rd):
    return validate(rd)


def job_z_extend(rd, against: Optional[RootDatum], bound: int):
    ext, mor = z_extension_data(rd)
    rep = z_extend_checks(rd, ext, mor)
    rep.details["extension"] = ext.to_json()
    rep.details["projection"] = mor.to_json()
    if against is not None:
        rep.params.update(iso_against=against.name, bound=bound)
        _iso_into(rep, ext, against, bound)
    return rep


def job_iso(rd, against: RootDatum, bound: int):
    rep = VerificationReport("rootdatum.iso", {"name": rd.name, "iso_against": against.name, "bound": bound})
    with rep.timed():
        _iso_into(rep, rd, against, bound)
    return rep


def _iso_into(rep, rd1, rd2, bound):
    rep.tick()
    found = find_isomorphism(rd1, rd2, bound)
    if found is None:
        rep.record(check="isomorphism", detail=f"none with entries bounded by {bound}")
        rep.details["iso"] = None
    else:
        P, Pinv_T = found
        rep.details["iso"] = [list(r) for r in P]
        rep.details["iso_inverse_transpose"] = [list(r) for r in Pinv_T]


def job_torus_identities(p, rank):
    return verify_torus_identities(p, rank)


def job_torus_oracle(p, rank, trials, seed):
    return verify_pointwise(p, rank, trials=trials, seed=seed)


def job_mu0(rd, p):
    return verify_mu0(Hyperalgebra(rd, p))


def job_borel(rd, p):
    return verify_borel(Hyperalgebra(rd, p))


def job_theorem(rd, p, deg, mode, trials, seed):
    deg = 2 * p if deg is None else deg
    alg = Hyperalgebra(rd, p, period=default_period(p, 2 * deg))
    return verify_theorem(alg, deg, mode=mode, trials=trials, seed=seed)


def job_compat(rd, p, deg):
    return compat_for(rd, p, 2 * p if deg is None else deg)


def job_assoc(rd, p, trials, seed):
    """Associativity on random triples and the matrix oracle on ⊕_{n<=8} V(n)."""
    period = None if p is None else default_period(p, 9)
    alg = Hyperalgebra(rd, p, period=period)
    rep = VerificationReport("verify.assoc", {"datum": rd.name, "p": p, "trials": trials}, seed=seed)
    rep.merge(verify_associativity(alg, trials=trials, seed=seed), tag={"part": "associativity"})
    M = weyl_corpus(alg.geom, 8, p)
    rep.merge(verify_matrix_oracle(alg, M, trials=trials, seed=seed), tag={"part": "matrix_oracle"})
    rep.details["module_dim"] = M.dim
    return rep


def job_contract(rd, p, n, module_json):
    geom = RankOne.from_datum(rd)
    if module_json is not None:
        M = WeightModule.from_json(module_json, geom)
        if M.p is None:
            M = reduce_module(M, p)
    else:
        lam = weight_with_pairing(geom, n)
        if lam is None:
            raise UsageError(f"{rd.name}: no weight with <λ, α^∨> = {n}")
        M = weyl_module(geom, lam, p)
    rep = VerificationReport("module.contract", {"context": rd.name, "p": p, "dim": M.dim})
    with rep.timed():
        rep.merge(validate_module(M), tag={"module": "input"})
        C = contract(M)
        rep.merge(validate_module(C), tag={"module": "contraction"})
    rep.details["contraction"] = C.to_json()
    return rep


def job_roundtrip(rd, p, n):
    return verify_roundtrip(RankOne.from_datum(rd), p, 12 if n is None else n)


def job_donkin(rd, p, n):
    return verify_donkin(RankOne.from_datum(rd), p, 10 if n is None else n)


def job_characters(rd, p, n):
    return verify_characters(RankOne.from_datum(rd), p, n)


def job_kinv(rd, p):
    return verify_kinv(rd, p)


# --------------------------------------------------------------------------


def run_jobs(name: str, jobs: Sequence[Callable[[], VerificationReport]], n_workers: int) -> VerificationReport:
    """Run jobs (in worker processes when n_workers > 1), merge in job order."""
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(j) for j in jobs]
            reports = [f.result() for f in futures]
    else:
        reports = [j() for j in jobs]
    if len(reports) == 1:
        return reports[0]
    top = VerificationReport(name, {"runs": len(reports)})
    for k, r in enumerate(reports):
        top.merge(r, tag={"run": k})
    top.details["runs"] = [r.to_dict(with_time=False) for r in reports]
    return top


def _jobs_for(args) -> List[Callable[[], VerificationReport]]:
    group, cmd = args.group, args.command
    if group == "rootdatum":
        data = _data(args.datum)
        against = RootDatum.load(args.iso_against) if args.iso_against else None
        if cmd == "validate":
            return [partial(job_validate, rd) for rd in data]
        if cmd == "z-extend":
            return [partial(job_z_extend, rd, against, args.bound) for rd in data]
        if cmd == "iso":
            if against is None:
                raise UsageError("iso needs --iso-against")
            return [partial(job_iso, rd, against, args.bound) for rd in data]
    if group == "verify":
        if cmd in ("lemma11", "torus-oracle"):
            ps, ranks = _primes(args.p), _ints(args.rank)
            if cmd == "lemma11":
                return [partial(job_torus_identities, p, r) for p in ps for r in ranks]
            return [partial(job_torus_oracle, p, r, args.trials, args.seed) for p in ps for r in ranks]
        data = _data(args.datum)
        if cmd == "assoc":
            ps = [None] + _primes(args.p)
            return [partial(job_assoc, rd, p, args.trials, args.seed) for rd in data for p in ps]
        ps = _primes(args.p)
        if cmd == "mu0":
            return [partial(job_mu0, rd, p) for rd in data for p in ps]
        if cmd == "borel":
            return [partial(job_borel, rd, p) for rd in data for p in ps]
        if cmd == "theorem":
            return [partial(job_theorem, rd, p, args.deg, args.mode, args.trials, args.seed)
                    for rd in data for p in ps]
        if cmd == "compat":
            return [partial(job_compat, rd, p, args.deg) for rd in data for p in ps]
    if group == "module":
        data, ps = _data(args.datum), _primes(args.p)
        if cmd == "contract":
            module_json = None
            if args.module:
                try:
                    with open(args.module, encoding="utf-8") as fh:
                        module_json = json.load(fh)
                except (OSError, json.JSONDecodeError) as exc:
                    raise UsageError(f"cannot read module {args.module}: {exc}")
            elif args.n is None:
                raise UsageError("contract needs --n or --module")
            return [partial(job_contract, rd, p, args.n, module_json) for rd in data for p in ps]
        if cmd == "roundtrip":
            return [partial(job_roundtrip, rd, p, args.n) for rd in data for p in ps]
        if cmd == "donkin":
            return [partial(job_donkin, rd, p, args.n) for rd in data for p in ps]
        if cmd == "characters":
            return [partial(job_characters, rd, p, args.n) for rd in data for p in ps]
        if cmd == "kinv":
            return [partial(job_kinv, rd, p) for rd in data for p in ps]
    raise UsageError(f"unknown command {group} {cmd}")


COMMANDS = {
    "rootdatum": ["validate", "z-extend", "iso"],
    "verify": ["lemma11", "torus-oracle", "mu0", "borel", "theorem", "compat", "assoc"],
    "module": ["contract", "roundtrip", "donkin", "characters", "kinv"],
}

DEFAULT_DATUM = {"rootdatum": "sl2,gl2,pgl2", "verify": "sl2,gl2,pgl2", "module": "sl2"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobsplit", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, cmds in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="command", required=True)
        for cmd in cmds:
            sp = sub.add_parser(cmd)
            sp.add_argument("--datum", default=DEFAULT_DATUM[group],
                            help="datum file(s) or corpus names, comma separated")
            sp.add_argument("--p", default="2,3", help="prime(s), comma separated")
            sp.add_argument("--rank", default="1,2", help="torus rank(s) for lemma11/torus-oracle")
            sp.add_argument("--deg", type=int, default=None, help="degree bound (default 2p)")
            sp.add_argument("--n", type=int, default=None, help="highest weight pairing / sweep bound")
            sp.add_argument("--module", default=None, help="module JSON file (module contract)")
            sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
            sp.add_argument("--trials", type=int, default=None)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--jobs", type=int, default=1)
            sp.add_argument("--iso-against", default=None)
            sp.add_argument("--bound", type=int, default=2)
            sp.add_argument("--out", default=None, help="report path (default stdout)")
            sp.add_argument("--no-time", action="store_true", help="omit wall_time_ms")
    return parser


DEFAULT_TRIALS = {"torus-oracle": 1000, "assoc": 500, "theorem": 1000}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if args.trials is None:
        args.trials = DEFAULT_TRIALS.get(args.command, 1000)
    if not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        jobs = _jobs_for(args)
        report = run_jobs(f"{args.group}.{args.command}", jobs, args.jobs)
    except (UsageError, MalformedDatum, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        report = VerificationReport(f"{args.group}.{args.command}")
        report.record(error=str(exc))
    text = report.to_json(with_time=not args.no_time)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(report.summary(), file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
