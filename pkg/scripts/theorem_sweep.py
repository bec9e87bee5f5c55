"""Ratio G / (gamma * sum f) and the normalized difference across N.

Writes one CSV row per (alpha, beta, f, N); the normalized column is
diff / (N lnln N / ln N), useful for trend plots.

    python3 scripts/theorem_sweep.py --N 10000 100000 1000000 > sweep.csv
"""
import argparse
import csv
import sys
import time

from beattymf.arith import parse_surd
from beattymf.beatty import derive_params
from beattymf.harness import theorem_check
from beattymf.multfun import function_by_name

ALPHAS = ["sqrt(2)", "(1+sqrt(5))/2", "(3+sqrt(3))/3"]
BETAS = ["0", "3/10"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="+", default=[10**4, 10**5, 10**6])
    ap.add_argument("--f", nargs="+", default=["two_squares", "kfree"])
    ap.add_argument("--alpha", nargs="+", default=ALPHAS)
    ap.add_argument("--beta", nargs="+", default=BETAS)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["alpha", "beta", "f", "N", "G", "main", "ratio", "normalized", "passed", "seconds"])
    for a in args.alpha:
        for b in args.beta:
            p = derive_params(parse_surd(a), parse_surd(b))
            for name in args.f:
                f = function_by_name(name)
                for N in args.N:
                    t0 = time.perf_counter()
                    rep = theorem_check(p, f, N)
                    w.writerow([a, b, rep.function_id, N, int(rep.G), repr(rep.main_term), f"{rep.ratio:.8f}",
                                f"{rep.normalized_diff:.6f}", rep.passed, f"{time.perf_counter() - t0:.2f}"])
                    sys.stdout.flush()


if __name__ == "__main__":
    main()
