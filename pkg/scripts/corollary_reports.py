"""Print the three corollary reports as JSON.

    python3 scripts/corollary_reports.py --N 10000000
"""
import argparse
import json

from beattymf.arith import parse_surd
from beattymf.beatty import derive_params
from beattymf.harness import corollary_four_squares, corollary_kfree, corollary_two_squares


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", default="sqrt(2)")
    ap.add_argument("--beta", default="0")
    ap.add_argument("--N", type=int, default=10**7)
    ap.add_argument("--N4", type=int, default=10**5, help="N for the r4 sum (capped at 1e7)")
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()

    p = derive_params(parse_surd(args.alpha), parse_surd(args.beta))
    reports = [corollary_two_squares(p, args.N).to_dict()]
    reports += [corollary_kfree(p, k, args.N).to_dict() for k in args.k]
    reports.append(corollary_four_squares(p, args.N4).to_dict())
    print(json.dumps(reports, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
