"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 precision or capacity failure,
3 a --check assertion failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from . import arith, beatty, discrepancy, expsum, harness, multfun, smoothing
from .errors import CapacityError, DomainError, ParseError, PrecisionExhausted

EXIT_USAGE, EXIT_PRECISION, EXIT_CHECK = 1, 2, 3


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def _params(args) -> beatty.BeattyParams:
    alpha = arith.parse_real(args.alpha, decimal="fixed" if args.fixed else "exact")
    return beatty.derive_params(alpha, arith.parse_real(args.beta))


def _function(args) -> multfun.ArithmeticFunction:
    return multfun.function_by_name(args.f, args.k)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _check(args, ok: bool, what: str):
    if args.check and not ok:
        raise CheckFailed(what)


# --- subcommands -------------------------------------------------------------

def cmd_membership(args):
    p = _params(args)
    res = beatty.is_member(p, args.n)
    if args.format == "json":
        return _json({"alpha": p.describe()["alpha"], "beta": p.describe()["beta"], "n": args.n, "member": res})
    return "true\n" if res else "false\n"


def cmd_generate(args):
    p = _params(args)
    members = beatty.generate_by_floor(p, args.N).tolist()
    if args.format == "csv":
        return _csv(["n"], [[m] for m in members])
    return _json({"N": args.N, "members": members})


def cmd_count(args):
    p = _params(args)
    c = beatty.count_members(p, args.N)
    scan = beatty.count_members(p, args.N, method="scan")
    _check(args, c == scan and abs(c - float(p.gamma) * args.N) <= 1, "count invariant")
    return _json({"N": args.N, "count": c, "scanCount": scan, "gammaN": float(p.gamma) * args.N})


def cmd_discrepancy(args):
    gamma = arith.parse_real(args.gamma, decimal="fixed" if args.fixed else "exact")
    delta = arith.parse_real(args.delta)
    Ms = args.M
    if len(Ms) == 1:
        top = Ms[0]
        Ms = [10**e for e in range(2, int(math.log10(top)) + 1) if 10**e < top] + [top]
    tau = args.tau
    if tau is None:
        tau = arith.estimate_type(arith.cf_expand(gamma, 30)).tau_hat if not (
            isinstance(gamma, arith.QuadraticSurd) and gamma.is_rational) else 1.0
    rows = discrepancy.discrepancy_series(gamma, delta, Ms, max(1.0, tau))
    if args.format == "csv":
        return _csv(["M", "D", "envelope"], rows)
    return _json({"tauHat": tau, "series": [{"M": m, "D": d, "envelope": e} for m, d, e in rows]})


def cmd_smooth(args):
    sp = smoothing.SmoothingParams(float(arith.parse_real(args.gamma)), args.Delta)
    xs = np.arange(args.points) / args.points
    psi = smoothing.psi(sp, xs)
    Psi = smoothing.psi_smooth(sp, xs)
    PsiK = smoothing.trig_poly_eval(sp, args.K, xs)
    if args.format == "csv":
        return _csv(["x", "psi", "Psi", "Psi_K"], zip(xs, psi.tolist(), Psi, PsiK))
    coeffs = [{"k": k, "re": c.real, "im": c.imag}
              for k in range(0, args.K + 1) for c in [smoothing.coefficient(sp, k)]]
    return _json({"gamma": sp.gamma, "Delta": sp.delta_width, "K": args.K,
                  "tailBound": smoothing.tail_bound(sp, args.K),
                  "grid": [{"x": x, "psi": int(a), "Psi": b, "Psi_K": c}
                           for x, a, b, c in zip(xs.tolist(), psi.tolist(), Psi.tolist(), PsiK.tolist())],
                  "coefficients": coeffs})


def cmd_expsum(args):
    f = _function(args)
    if args.kmax:
        p = _params(args)
        rows = expsum.k_sweep(p.gamma, f, args.N, args.kmax, args.threads)
        if args.format == "csv":
            return _csv(["k", "abs_S", "envelope"], [(r["k"], r["abs_S"], r["envelope"]) for r in rows])
        return _json({"N": args.N, "rows": rows})
    alpha = arith.parse_real(args.alpha, decimal="fixed" if args.fixed else "exact")
    res = expsum.exp_sum(f, alpha, args.N, args.threads)
    _check(args, abs(res.value) <= args.N * max(1.0, f.class_bound_A or 1.0) + res.accumulation_error,
           "triangle inequality")
    return _json(asdict(res))


def cmd_convergents(args):
    x = arith.parse_real(args.alpha, decimal="fixed" if args.fixed else "exact")
    cf = arith.cf_expand(x, args.count)
    if args.format == "csv":
        return _csv(["i", "a", "p", "q"], [(i, a, p, q) for i, (a, (p, q)) in
                                           enumerate(zip(cf.quotients, cf.convergents))])
    out = {"quotients": cf.quotients, "convergents": [list(c) for c in cf.convergents]}
    if args.N:
        rep = expsum.select_convergent_window(x, args.N)
        out["window"] = asdict(rep)
    return _json(out)


def cmd_type_witness(args):
    x = arith.parse_real(args.alpha, decimal="fixed" if args.fixed else "exact")
    w = arith.estimate_type(arith.cf_expand(x, args.count))
    return _json({"depth": w.depth, "tauHat": w.tau_hat, "perIndexRatios": list(w.per_index_ratios)})


def cmd_theorem(args):
    p = _params(args)
    cfg = harness.HarnessConfig.for_N(args.N, float(p.gamma), args.Delta, args.K)
    rep = harness.theorem_check(p, _function(args), args.N, cfg, args.threads)
    _check(args, rep.passed and 0.99 <= rep.ratio <= 1.01, "theorem check")
    if args.format == "csv":
        return _csv(["N", "G", "mainTerm", "diff", "envelope", "ratio"],
                    [(rep.N, rep.G, rep.main_term, rep.diff, rep.envelope, rep.ratio)])
    return rep.to_json() + "\n"


CHECKS = {"two-squares": lambda r: abs(r.rel_dev_tight) <= 0.01 and abs(r.rel_dev_closed) <= 0.10,
          "kfree": lambda r: abs(r.rel_dev_closed) <= 5e-3,
          "four-squares": lambda r: abs(r.rel_dev_closed) <= 0.01}


def cmd_corollary(args):
    p = _params(args)
    if args.which == "two-squares":
        rep = harness.corollary_two_squares(p, args.N, args.threads)
    elif args.which == "kfree":
        rep = harness.corollary_kfree(p, args.k, args.N, args.threads)
    else:
        rep = harness.corollary_four_squares(p, args.N, args.threads)
    _check(args, CHECKS[args.which](rep), f"corollary {args.which}")
    return rep.to_json() + "\n"


def cmd_constants(args):
    C, tail = multfun.landau_constant(args.cutoff)
    return _json({"landauC": C, "landauTailBound": tail, "cutoff": args.cutoff,
                  "zeta": {str(k): multfun.zeta_int(k) for k in range(2, args.kmax + 1)},
                  "halfPiSquared": math.pi**2 / 2})


def cmd_audit(args):
    p = _params(args)
    cfg = harness.HarnessConfig.for_N(args.N, float(p.gamma), args.Delta, args.K)
    rep = harness.decomposition_audit(p, _function(args), args.N, cfg, args.threads)
    _check(args, rep.residual <= 1e-6 * args.N and rep.smoothing_gap <= rep.smoothing_budget, "audit")
    return _json(asdict(rep))


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="beattymf", description="Sums of multiplicative functions over Beatty sequences.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, beatty_args=True, fn=False):
        if beatty_args:
            sp.add_argument("--alpha", required=True, help="surd grammar, e.g. 'sqrt(2)', or a decimal")
            sp.add_argument("--beta", default="0")
        sp.add_argument("--fixed", action="store_true", help="read decimal alpha as a 192-bit FixedReal")
        if fn:
            sp.add_argument("--f", default="unit", help="unit, two_squares, kfree, r4, r4_over_8n, sigma, moebius_abs")
            sp.add_argument("--k", type=_positive, default=2)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--threads", type=_positive, default=1)
        sp.add_argument("--out", default=None)
        sp.add_argument("--check", action="store_true")

    s = sub.add_parser("membership"); common(s); s.add_argument("--n", type=_positive, required=True)
    s.set_defaults(run=cmd_membership, format="text")
    s = sub.add_parser("generate"); common(s); s.add_argument("--N", type=_positive, required=True)
    s.set_defaults(run=cmd_generate)
    s = sub.add_parser("count"); common(s); s.add_argument("--N", type=_positive, required=True)
    s.set_defaults(run=cmd_count)
    s = sub.add_parser("discrepancy"); common(s, beatty_args=False)
    s.add_argument("--gamma", required=True); s.add_argument("--delta", default="0")
    s.add_argument("--M", type=_positive, nargs="+", required=True)
    s.add_argument("--tau", type=float, default=None)
    s.set_defaults(run=cmd_discrepancy)
    s = sub.add_parser("smooth"); common(s, beatty_args=False)
    s.add_argument("--gamma", required=True); s.add_argument("--Delta", type=float, required=True)
    s.add_argument("--K", type=_positive, default=100); s.add_argument("--points", type=_positive, default=1000)
    s.set_defaults(run=cmd_smooth)
    s = sub.add_parser("expsum"); common(s, fn=True); s.add_argument("--N", type=_positive, required=True)
    s.add_argument("--kmax", type=_positive, default=None)
    s.set_defaults(run=cmd_expsum)
    s = sub.add_parser("convergents"); common(s, beatty_args=False)
    s.add_argument("--alpha", required=True); s.add_argument("--count", type=_positive, default=10)
    s.add_argument("--N", type=_positive, default=None)
    s.set_defaults(run=cmd_convergents)
    s = sub.add_parser("type-witness"); common(s, beatty_args=False)
    s.add_argument("--alpha", required=True); s.add_argument("--count", type=_positive, default=20)
    s.set_defaults(run=cmd_type_witness)
    for name, fn in (("theorem", cmd_theorem), ("audit", cmd_audit)):
        s = sub.add_parser(name); common(s, fn=True); s.add_argument("--N", type=_positive, required=True)
        s.add_argument("--Delta", type=float, default=None); s.add_argument("--K", type=_positive, default=None)
        s.set_defaults(run=fn)
    s = sub.add_parser("corollary"); common(s, fn=True)
    s.add_argument("which", choices=("two-squares", "kfree", "four-squares"))
    s.add_argument("--N", type=_positive, required=True)
    s.set_defaults(run=cmd_corollary)
    s = sub.add_parser("constants"); common(s, beatty_args=False)
    s.add_argument("--cutoff", type=_positive, default=10**6); s.add_argument("--kmax", type=_positive, default=4)
    s.set_defaults(run=cmd_constants)
    return ap


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        text = args.run(args)
    except (UsageError, ParseError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionExhausted, CapacityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except CheckFailed as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
