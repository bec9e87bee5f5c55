"""|S(k gamma, f; N)| over k against the unit-constant envelope, as CSV.

    python3 scripts/mv_sweep.py --N 1000000 --kmax 50 > sweep.csv
"""
import argparse
import logging

from beattymf.arith import parse_surd
from beattymf.beatty import derive_params
from beattymf.expsum import k_sweep
from beattymf.multfun import function_by_name


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", default="sqrt(2)")
    ap.add_argument("--f", default="two_squares")
    ap.add_argument("--N", type=int, default=10**6)
    ap.add_argument("--kmax", type=int, default=50)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    gamma = derive_params(parse_surd(args.alpha)).gamma
    rows = k_sweep(gamma, function_by_name(args.f), args.N, args.kmax, args.threads)
    print("k,abs_S,envelope,ratio,window_hit,q")
    for r in rows:
        print(f"{r['k']},{r['abs_S']:.6f},{r['envelope']:.6f},{r['abs_S'] / r['envelope']:.3e},"
              f"{int(r['window_hit'])},{r['q']}")
    hits = sum(r["window_hit"] for r in rows)
    logging.info("window hits: %d/%d", hits, len(rows))


if __name__ == "__main__":
    main()
