import json
import math

import numpy as np
import pytest

from beattymf.arith import parse_surd
from beattymf.beatty import count_members, derive_params, membership_mask
from beattymf.errors import DomainError
from beattymf.harness import (HarnessConfig, beatty_sum, corollary_four_squares, corollary_kfree,
                              corollary_two_squares, decomposition_audit, theorem_check, theorem_envelope)
from beattymf.multfun import ArithmeticFunction, SieveTable, sieve_kfree, sieve_two_squares

R2 = parse_surd("sqrt(2)")
PHI = parse_surd("(1+sqrt(5))/2")
UNIT = ArithmeticFunction("unit")
KFREE = ArithmeticFunction("k_free", 2)
TWO_SQ = ArithmeticFunction("two_squares")
CASES = [derive_params(a, parse_surd(b)) for a in (R2, PHI, parse_surd("(3+sqrt(3))/3"))
         for b in ("0", "3/10", "1", "-27/10")]


def test_unit_sum_is_count():
    for p in CASES:
        for N in (1, 17, 1000, 54321):
            assert beatty_sum(p, UNIT, N) == count_members(p, N)


def test_two_routes_agree():
    for p in CASES:
        for f in (TWO_SQ, KFREE):
            assert beatty_sum(p, f, 20000) == beatty_sum(p, f, 20000, via="floor")


def test_hand_examples():
    assert beatty_sum(derive_params(2, 0), TWO_SQ, 20) == 7
    assert beatty_sum(derive_params(R2, 0), KFREE, 10) == 4


def test_indicator_sum_monotone():
    p = CASES[5]
    vals = sieve_two_squares(5000).values.astype(np.int64)
    running = np.cumsum(vals * membership_mask(p, 5000))
    assert np.all(np.diff(running) >= 0)
    assert running[-1] == beatty_sum(p, TWO_SQ, 5000)


def test_theorem_examples():
    rep = theorem_check(derive_params(R2, 0), UNIT, 1000)
    assert abs(rep.diff) <= 1 and rep.passed
    rep = theorem_check(derive_params(R2, 0), KFREE, 10**6)
    assert 0.995 <= rep.ratio <= 1.005
    rep = theorem_check(derive_params(PHI, parse_surd("3/10")), TWO_SQ, 10**6)
    assert 0.99 <= rep.ratio <= 1.01 and rep.passed


def test_theorem_report_schema():
    rep = theorem_check(derive_params(R2, 0), KFREE, 5000)
    d = json.loads(rep.to_json())
    assert set(d) == {"meta", "results", "provenance"}
    assert d["meta"]["functionId"] == "k_free(2)"
    assert d["results"]["residuals"]["decomposition"] <= 1e-6 * 5000
    assert rep.to_json() == rep.to_json()


def test_audit_zero_function():
    zero = SieveTable("unit", 3000, np.zeros(3000, dtype=np.uint8), "constant")
    rep = decomposition_audit(derive_params(R2, 0), zero, 3000)
    assert rep.G == 0 and rep.smoothed_direct == 0 and rep.fourier_side == 0


@pytest.mark.parametrize("p", CASES[::3])
def test_audit_identity_and_budget(p):
    for f in (TWO_SQ, KFREE, ArithmeticFunction("r4_over_8n")):
        rep = decomposition_audit(p, f, 3000)
        assert rep.residual <= 1e-6 * 3000
        assert rep.smoothing_gap <= rep.smoothing_budget


def test_audit_limit():
    with pytest.raises(DomainError):
        decomposition_audit(CASES[0], TWO_SQ, 10**5 + 1)


def test_config_clamp():
    cfg = HarnessConfig.for_N(16, 0.7)
    assert cfg.clamped and cfg.delta_width <= 0.12
    cfg = HarnessConfig.for_N(10**6, 0.01)
    assert cfg.clamped and cfg.delta_width == pytest.approx(0.005)
    cfg = HarnessConfig.for_N(10**6, 0.7)
    assert not cfg.clamped and cfg.K == cfg.R == math.ceil(math.log(10**6) ** 3)


def test_envelope_guard():
    with pytest.raises(DomainError):
        theorem_envelope(15)
    with pytest.raises(DomainError):
        HarnessConfig.for_N(10, 0.5)


def test_two_squares_corollary_rational_alpha():
    N = 10**4
    rep = corollary_two_squares(derive_params(2, 0), N)
    vals = sieve_two_squares(N).values
    assert rep.beatty_value == int(vals[1::2].sum())  # n = 2, 4, 6, ...
    assert rep.extras["envelopeDominatesMainTerm"]


def test_kfree_corollary_cube_free():
    rep = corollary_kfree(derive_params(R2, 0), 3, 10**6)
    assert abs(rep.rel_dev_closed) <= 5e-3


def test_kfree_corollary_rational_alpha_is_off():
    # one third of the squarefree numbers are even, so the even ones have
    # density 2/pi^2, not (1/2)(6/pi^2): the closed form is off by -1/3
    N = 10**4
    rep = corollary_kfree(derive_params(2, 0), 2, N)
    assert rep.beatty_value == int(sieve_kfree(N, 2).values[1::2].sum())
    assert rep.rel_dev_closed == pytest.approx(-1 / 3, abs=2e-2)


def test_four_squares_corollary():
    rep = corollary_four_squares(derive_params(R2, 0), 10**5)
    assert abs(rep.rel_dev_closed) <= 0.01
    assert abs(rep.extras["sumR4OverNMinusPi2N"]) <= 10 * rep.extras["logSquaredEnvelope"]
