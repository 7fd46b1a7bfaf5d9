#!/usr/bin/env python3
"""Run every acceptance criterion through the command-line driver.

Each criterion is one or two ``frobsplit`` invocations; reports land in
--out-dir and a PASS/FAIL line is printed per criterion.

    python3 scripts/run_acceptance.py --out-dir reports --jobs 4
"""
import argparse
import subprocess
import sys
import time
from pathlib import Path

CRITERIA = {
    1: ["verify lemma11 --p 2,3,5 --rank 1,2"],
    2: ["verify torus-oracle --p 2,3 --rank 1,2 --trials 1000 --seed 22"],
    3: ["verify mu0 --datum sl2,gl2,pgl2 --p 2,3"],
    4: ["verify theorem --datum sl2,gl2,pgl2 --p 2,3 --mode exhaustive"],
    5: ["verify borel --datum sl2,gl2,pgl2 --p 2,3"],
    6: ["rootdatum z-extend --datum pgl2 --iso-against gl2 --bound 2",
        "rootdatum z-extend --datum pgl3"],
    7: ["verify compat --datum pgl2,gl2,sl2,sl3,pgl3 --p 2,3"],
    8: ["module roundtrip --datum sl2 --p 2,3,5 --n 12"],
    9: ["module donkin --datum sl2 --p 2,3 --n 10"],
    10: ["module characters --datum sl2 --p 3,5"],
    11: ["module kinv --datum gl2,pgl2 --p 2,3"],
    12: ["verify assoc --datum sl2,gl2,pgl2 --p 2,3 --trials 500 --seed 1234"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ok_all = True
    for k, cmds in CRITERIA.items():
        if args.only and k not in args.only:
            continue
        t0 = time.perf_counter()
        codes = []
        for i, cmd in enumerate(cmds):
            path = out / f"criterion_{k:02d}_{i}.json"
            argv = [sys.executable, "-m", "frobsplit", *cmd.split(), "--out", str(path), "--jobs", str(args.jobs)]
            codes.append(subprocess.run(argv, stderr=subprocess.DEVNULL).returncode)
        ok = all(c == 0 for c in codes)
        ok_all &= ok
        print(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  ({time.perf_counter() - t0:.1f}s)  exit codes {codes}")
    return 0 if ok_all else 1


if __name__ == "__main__":
    sys.exit(main())
