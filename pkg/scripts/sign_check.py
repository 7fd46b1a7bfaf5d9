#!/usr/bin/env python3
"""Associativity with the two candidate rules for moving the torus past F^(a).

The implemented rule is t(H) F^(a) = F^(a) t(H - aα).  Replacing it by
t(H) F^(a) = F^(a) t(H + aα) produces non-associative products; this
script counts them on random SL2 triples.

    python3 scripts/sign_check.py --trials 300
"""
import argparse

from frobsplit.hyperalg import Hyperalgebra, RankOne, verify_associativity
from frobsplit.rootdata import load_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--datum", default="sl2")
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rd = load_corpus(args.datum)

    good = verify_associativity(Hyperalgebra(rd), trials=args.trials, seed=args.seed)
    print(f"implemented rule: {good.failure_count}/{good.trials} non-associative triples")

    original = RankOne.shift_vector
    RankOne.shift_vector = lambda self, k: tuple(k * a for a in self.alpha)
    try:
        bad = verify_associativity(Hyperalgebra(rd), trials=args.trials, seed=args.seed)
    finally:
        RankOne.shift_vector = original
    print(f"flipped rule:     {bad.failure_count}/{bad.trials} non-associative triples")


if __name__ == "__main__":
    main()
