"""Acceptance criteria 1-14, each printing one PASS/FAIL line."""
import io
import json
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from beattymf import cli
from beattymf.arith import QuadraticSurd, parse_surd
from beattymf.beatty import count_members, derive_params, generate_by_floor, is_member, membership_mask
from beattymf.discrepancy import beatty_points, discrepancy_fast, discrepancy_oracle
from beattymf.expsum import select_convergent_window, window_radius
from beattymf.harness import (corollary_four_squares, corollary_kfree, corollary_two_squares,
                              decomposition_audit, theorem_check)
from beattymf.multfun import (ArithmeticFunction, kfree_count_moebius, landau_constant, r4_jacobi,
                              r4_lattice_table, sieve_r4, sieve_two_squares, sigma_sq_sum, zeta_int)
from beattymf.smoothing import (SmoothingParams, coefficient_bound, coefficients, exceptional_indicator, psi,
                                psi_smooth, tail_bound, trig_poly_grid)

SQRT2 = parse_surd("sqrt(2)")
GOLDEN = parse_surd("(1+sqrt(5))/2")
THIRD = parse_surd("(3+sqrt(3))/3")  # 1 + sqrt(3)/3
ALPHAS = [SQRT2, GOLDEN, THIRD]
BETAS = [QuadraticSurd.rational(b) for b in (0, Fraction(3, 10), 1, Fraction(-27, 10))]
MATRIX = [derive_params(a, b) for a in ALPHAS for b in BETAS]


@contextmanager
def criterion(capsys, n, title):
    detail = {}
    status = "FAIL"
    t0 = time.perf_counter()
    try:
        yield detail
        status = "PASS"
    finally:
        extra = ", ".join(f"{k}={v}" for k, v in detail.items())
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {status} {title} ({extra}) [{time.perf_counter() - t0:.1f}s]")


def test_criterion_01_membership_equivalence(capsys):
    with criterion(capsys, 1, "membership scan == floor generation, n <= 1e5") as d:
        t0 = time.perf_counter()
        N = 10**5
        mismatches = 0
        for p in MATRIX:
            mask = membership_mask(p, N)
            gen = np.zeros(N, dtype=bool)
            gen[generate_by_floor(p, N) - 1] = True
            mismatches += int(np.count_nonzero(mask != gen))
        # the scalar path on a sample, against the vector scan
        for p in MATRIX:
            mask = membership_mask(p, 2000)
            assert all(is_member(p, n) == bool(mask[n - 1]) for n in range(1, 2001))
        d["mismatches"] = mismatches
        assert mismatches == 0
        assert time.perf_counter() - t0 < 10


def test_criterion_02_counting(capsys):
    with criterion(capsys, 2, "|count(N) - gamma N| <= 1 for N <= 1e4") as d:
        worst = 0.0
        for p in MATRIX:
            g = p.gamma
            for N in range(1, 10**4 + 1):
                c = count_members(p, N)
                dev = g * N - c
                # exact: -1 <= gamma N - c <= 1
                assert (dev + 1).sign() >= 0 and (1 - dev).sign() >= 0, (p.alpha, N)
            cum = np.cumsum(membership_mask(p, 10**4))
            assert cum[-1] == count_members(p, 10**4)
            worst = max(worst, float(np.max(np.abs(cum - float(g) * np.arange(1, 10**4 + 1)))))
        d["max_dev"] = f"{worst:.4f}"


def test_criterion_03_jacobi_vs_lattice(capsys):
    with criterion(capsys, 3, "r4 Jacobi == lattice count, n <= 5000") as d:
        t0 = time.perf_counter()
        lattice = r4_lattice_table(5000)
        bad = [n for n in range(1, 5001) if r4_jacobi(n) != int(lattice[n])]
        table = sieve_r4(5000).values
        bad += [n for n in range(1, 5001) if int(table[n - 1]) != int(lattice[n])]
        d["mismatches"] = len(bad)
        assert not bad
        assert time.perf_counter() - t0 < 30


def test_criterion_04_two_squares_methods(capsys):
    with criterion(capsys, 4, "two-squares marking == factor criterion, N = 1e6") as d:
        a = sieve_two_squares(10**6, "mark_sum_of_squares").values
        b = sieve_two_squares(10**6, "factor_criterion").values
        d["count"] = int(a.sum())
        assert np.array_equal(a, b)


def _corpus(rng):
    sets = []
    for _ in range(300):
        M = rng.randint(1, 300)
        sets.append([rng.random() for _ in range(M)])
    for _ in range(180):
        M = rng.randint(1, 120)
        den = rng.choice([7, 64, 97, 1000])
        sets.append([Fraction(rng.randrange(den), den) for _ in range(M)])
    for M in (1, 2, 3, 10, 50, 300):
        sets.append([Fraction(i, M) for i in range(M)])
        sets.append([(i + 0.5) / M for i in range(M)])
    for g in (SQRT2 / 2, GOLDEN - 1, THIRD.invert()):
        for M in (5, 17, 100, 300):
            sets.append(beatty_points(g, 0, M).tolist())
    for M in (4, 40):
        sets.append([0.0] * M)
        sets.append([0.25] * (M // 2) + [0.75] * (M // 2))
    return sets


def test_criterion_05_discrepancy_fast_vs_oracle(capsys):
    with criterion(capsys, 5, "discrepancy fast == oracle on corpus") as d:
        sets = _corpus(random.Random(20240501))
        d["instances"] = len(sets)
        assert len(sets) >= 500
        worst = 0.0
        for pts in sets:
            o, f = discrepancy_oracle(pts).value, discrepancy_fast(pts).value
            if isinstance(pts[0], Fraction):
                assert o == f
            else:
                worst = max(worst, abs(float(o) - float(f)))
        d["max_float_gap"] = f"{worst:.2e}"
        assert worst <= 1e-12


def test_criterion_06_smoothing(capsys):
    with criterion(capsys, 6, "smoothing properties, coefficient bound, uniform truncation") as d:
        xs = np.arange(10**5) / 10**5
        for g, w in ((float(SQRT2 / 2), 0.01), (float(SQRT2 / 2), 0.002), (0.7, 0.05)):
            sp = SmoothingParams(g, w)
            P = psi_smooth(sp, xs)
            assert np.max(np.abs(P - psi_smooth(sp, xs + 1.0))) <= 1e-12
            assert P.min() >= 0.0 and P.max() <= 1.0
            ok = ~exceptional_indicator(sp, xs)
            assert np.array_equal(P[ok], psi(sp, xs[ok]).astype(float))
        sp = SmoothingParams(float(SQRT2 / 2), 0.01)
        k = np.arange(1, 10**5 + 1)
        assert np.all(np.abs(coefficients(sp, 10**5)) <= coefficient_bound(sp, k) * (1 + 1e-12))
        for w, K in ((0.01, 10**3), (0.002, 10**4)):
            sp = SmoothingParams(float(SQRT2 / 2), w)
            gap = float(np.max(np.abs(trig_poly_grid(sp, K, 10**5) - psi_smooth(sp, xs))))
            d[f"sup_gap(D={w},K={K})"] = f"{gap:.2e}<= {tail_bound(sp, K):.2e}"
            assert gap <= tail_bound(sp, K)


def test_criterion_07_exchange_identity(capsys):
    with criterion(capsys, 7, "decomposition audit residual <= 1e-6 N, 12 configs") as d:
        worst = 0.0
        betas = (BETAS[0], BETAS[1], BETAS[3])
        for a, b in zip(ALPHAS, betas):
            p = derive_params(a, b)
            for f in (ArithmeticFunction("two_squares"), ArithmeticFunction("k_free", 2)):
                for N in (10**4, 10**5):
                    rep = decomposition_audit(p, f, N)
                    assert rep.residual <= 1e-6 * N, (a, f, N, rep.residual)
                    assert rep.smoothing_gap <= rep.smoothing_budget
                    worst = max(worst, rep.residual / N)
        d["max_residual_over_N"] = f"{worst:.2e}"


def test_criterion_08_theorem_desk_scale(capsys):
    with criterion(capsys, 8, "ratio in [0.99, 1.01] and normalized diff <= 1, N = 1e6") as d:
        N = 10**6
        ratios = []
        for a in (SQRT2, GOLDEN):
            for b in BETAS[:2]:
                p = derive_params(a, b)
                for f in (ArithmeticFunction("two_squares"), ArithmeticFunction("k_free", 2)):
                    t0 = time.perf_counter()
                    rep = theorem_check(p, f, N)
                    assert time.perf_counter() - t0 < 60
                    assert 0.99 <= rep.ratio <= 1.01
                    assert rep.normalized_diff <= 1
                    assert rep.G == rep.G_by_floor
                    ratios.append(rep.ratio)
        d["ratio_range"] = f"[{min(ratios):.5f}, {max(ratios):.5f}]"


def test_criterion_09_two_squares_corollary(capsys):
    with criterion(capsys, 9, "two-squares corollary at N = 1e7") as d:
        rep = corollary_two_squares(derive_params(SQRT2), 10**7)
        d["tight"] = f"{rep.rel_dev_tight:.2e}"
        d["closed"] = f"{rep.rel_dev_closed:.3f}"
        assert abs(rep.rel_dev_tight) <= 0.01
        assert abs(rep.rel_dev_closed) <= 0.10


def test_criterion_10_kfree_corollary(capsys):
    with criterion(capsys, 10, "squarefree corollary at N = 1e7 and Moebius count") as d:
        rep = corollary_kfree(derive_params(SQRT2), 2, 10**7)
        d["closed"] = f"{rep.rel_dev_closed:.2e}"
        assert abs(rep.rel_dev_closed) <= 5e-3
        assert kfree_count_moebius(10**6, 2) == 607926
        assert int(ArithmeticFunction("k_free", 2).table(10**6).values.sum()) == 607926


def test_criterion_11_four_squares_corollary(capsys):
    with criterion(capsys, 11, "four-squares corollary, global r4 sum, sigma^2 sum") as d:
        rep = corollary_four_squares(derive_params(SQRT2), 10**5)
        d["beatty"] = f"{rep.rel_dev_closed:.2e}"
        assert abs(rep.rel_dev_closed) <= 0.01
        N = 10**6
        total = int(sieve_r4(N).values.sum(dtype=np.int64))
        dev = total / (math.pi**2 * N**2 / 2) - 1
        d["global"] = f"{dev:.2e}"
        assert abs(dev) <= 1e-4
        N = 10**5
        sdev = sigma_sq_sum(N) / (5 / 6 * zeta_int(3) * N**3) - 1
        d["sigma2"] = f"{sdev:.2e}"
        assert abs(sdev) <= 5e-3


def test_criterion_12_constants(capsys):
    with criterion(capsys, 12, "zeta(2), zeta(4), Landau constant stability") as d:
        assert abs(zeta_int(2) - math.pi**2 / 6) <= 1e-10
        assert abs(zeta_int(4) - math.pi**4 / 90) <= 1e-10
        c6, t6 = landau_constant(10**6)
        c7, t7 = landau_constant(10**7)
        d["C"] = f"{c7:.9f}"
        d["drift"] = f"{abs(c6 - c7):.1e}"
        assert abs(c6 - c7) <= 1e-6
        # the certified tail at 1e6 must cover the move to 1e7
        assert abs(c6 - c7) <= t6 + t7


def _within_q2(x, a, q):
    d = x - Fraction(a, q)
    bound = Fraction(1, q * q)
    return (bound - d).sign() >= 0 and (bound + d).sign() >= 0


def test_criterion_13_convergent_window(capsys):
    with criterion(capsys, 13, "convergent window instrumentation, N = 1e8") as d:
        N = 10**8
        R = window_radius(N)
        assert R == math.ceil(math.log(N) ** 3)
        gamma = derive_params(SQRT2).gamma
        assert select_convergent_window(gamma, N).window_hit
        assert select_convergent_window(SQRT2, N).q == 13860
        hits = total = 0
        for k in [k for k in range(-200, 201) if k]:
            x = gamma * k
            rep = select_convergent_window(x, N)
            total += 1
            hits += rep.window_hit
            if rep.q is None:
                continue
            assert math.gcd(rep.a, rep.q) == 1
            assert rep.q >= R
            assert _within_q2(x, rep.a, rep.q)
        d["hit_rate"] = f"{hits}/{total}"


def _theorem_json(threads):
    out = io.StringIO()
    code = cli.run(["theorem", "--alpha", "sqrt(2)", "--beta", "0", "--f", "kfree", "--k", "2",
                    "--N", "1000000", "--format", "json", "--threads", str(threads)], stdout=out)
    assert code == 0
    return out.getvalue()


def _leaves(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _leaves(v, f"{prefix}.{k}")
    else:
        yield prefix, obj


def test_criterion_14_determinism(capsys):
    with criterion(capsys, 14, "theorem JSON across runs and thread counts") as d:
        a, b, c = _theorem_json(1), _theorem_json(1), _theorem_json(8)
        assert a == b
        d["threads_byte_identical"] = a == c
        la, lc = dict(_leaves(json.loads(a))), dict(_leaves(json.loads(c)))
        assert la.keys() == lc.keys()
        for key, va in la.items():
            vc = lc[key]
            if isinstance(va, float) and not isinstance(va, bool):
                assert abs(va - vc) <= 1e-9 * max(abs(va), abs(vc)), key
            else:
                assert va == vc, key
