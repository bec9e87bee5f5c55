"""M * D(M) / ln M for Beatty points, next to the reference curve M^(-1/tau).

For bounded partial quotients the first column should stay roughly flat.
"""
import argparse
import math

from beattymf.arith import cf_expand, estimate_type, parse_surd
from beattymf.discrepancy import beatty_discrepancy, discrepancy_envelope


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gamma", nargs="+", default=["sqrt(2)/2", "(-1+sqrt(5))/2", "(-1+sqrt(3))/2"])
    ap.add_argument("--delta", default="0")
    ap.add_argument("--max-exp", type=int, default=6)
    args = ap.parse_args()

    print("gamma,tau_hat,M,D,M_D_over_lnM,envelope")
    for text in args.gamma:
        g = parse_surd(text)
        tau = estimate_type(cf_expand(g, 30)).tau_hat
        for e in range(2, args.max_exp + 1):
            M = 10**e
            D = float(beatty_discrepancy(g, parse_surd(args.delta), M).value)
            print(f"{text},{tau:.4f},{M},{D:.6e},{M * D / math.log(M):.4f},{discrepancy_envelope(tau, M):.3e}")


if __name__ == "__main__":
    main()
