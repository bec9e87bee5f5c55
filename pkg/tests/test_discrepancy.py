import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beattymf.arith import parse_surd
from beattymf.discrepancy import (beatty_discrepancy, beatty_points, discrepancy_envelope, discrepancy_fast,
                                  discrepancy_oracle, discrepancy_series)
from beattymf.errors import DomainError


def test_oracle_examples():
    assert discrepancy_oracle([0, 0.25, 0.5, 0.75]).value == 0.25
    assert discrepancy_oracle([0.5]).value == 1.0
    assert discrepancy_oracle([0.1, 0.9]).value == pytest.approx(0.8)
    assert discrepancy_oracle([Fraction(1, 10), Fraction(9, 10)]).value == Fraction(4, 5)


def test_equispaced_fast():
    for M in (1, 7, 100, 1000):
        assert discrepancy_fast([Fraction(i, M) for i in range(M)]).value == Fraction(1, M)


def test_beatty_examples():
    g = parse_surd("(-1+sqrt(5))/2")
    pts = beatty_points(g, 0, 5)
    assert beatty_discrepancy(g, 0, 5).value == pytest.approx(float(discrepancy_oracle(pts).value), abs=1e-12)
    assert beatty_discrepancy(Fraction(1, 2), 0, 2).value == pytest.approx(0.5)
    M = 10**4
    assert M * beatty_discrepancy(parse_surd("sqrt(2)/2"), 0, M).value <= 3 * math.log(M)


def test_decreasing_on_decades():
    g = parse_surd("sqrt(2)/2")
    vals = [beatty_discrepancy(g, 0, M).value for M in (10**2, 10**3, 10**4, 10**5)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_envelope_examples():
    assert discrepancy_envelope(1, 10**4) == pytest.approx(1e-4)
    assert discrepancy_envelope(2, 10**4) == pytest.approx(1e-2)


def test_series_rows():
    rows = discrepancy_series(parse_surd("sqrt(2)/2"), 0, [100, 1000], 1.0)
    assert [r[0] for r in rows] == [100, 1000]
    assert rows[1][2] == pytest.approx(1e-3)


def test_rejects_bad_points():
    with pytest.raises(DomainError):
        discrepancy_oracle([])
    with pytest.raises(DomainError):
        discrepancy_fast([0.5, 1.0])


def test_random_corpus_matches_oracle():
    rng = random.Random(7)
    for _ in range(100):
        pts = [Fraction(rng.randrange(50), 50) for _ in range(rng.randint(1, 80))]
        assert discrepancy_fast(pts).value == discrepancy_oracle(pts).value


points = st.lists(st.floats(0, 1, exclude_max=True, allow_nan=False), min_size=1, max_size=60)


@settings(max_examples=80)
@given(points, st.randoms())
def test_permutation_invariance(pts, rnd):
    shuffled = pts[:]
    rnd.shuffle(shuffled)
    assert discrepancy_fast(shuffled).value == discrepancy_fast(pts).value
    assert discrepancy_oracle(shuffled).value == discrepancy_oracle(pts).value


@settings(max_examples=80)
@given(points)
def test_scale_bounds_and_oracle(pts):
    d = discrepancy_fast(pts).value
    assert 1 / (2 * len(pts)) - 1e-15 <= d <= 1.0
    assert abs(d - discrepancy_oracle(pts).value) <= 1e-12


def test_numpy_input():
    pts = np.random.default_rng(3).random(500)
    assert discrepancy_fast(pts).value == pytest.approx(discrepancy_oracle(pts.tolist()).value, abs=1e-12)
