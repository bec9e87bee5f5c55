import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beattymf.errors import DomainError
from beattymf.smoothing import (SmoothingParams, coefficient, coefficient_bound,
                                exceptional_indicator, fourier_coeff, psi, psi_smooth, tail_bound,
                                trig_poly_eval, trig_poly_grid)

SP = SmoothingParams(0.7, 0.05)


def test_psi_examples():
    assert psi(SP, 0.5) == 1
    assert psi(SP, 0.9) == 0
    assert psi(SmoothingParams(0.75, 0.05), 1.75) == 1  # boundary included, 0.75 exact in binary
    assert psi(SP, 0.0) == 0


def test_psi_smooth_examples():
    assert psi_smooth(SP, 0.7) == pytest.approx(0.5, abs=1e-15)
    assert psi_smooth(SP, 0.35) == 1.0
    assert psi_smooth(SP, 0.72) == pytest.approx(0.3, abs=1e-12)


def test_admissibility():
    with pytest.raises(DomainError):
        SmoothingParams(0.7, 0.2)
    with pytest.raises(DomainError):
        SmoothingParams(0.05, 0.04)
    with pytest.raises(DomainError):
        SmoothingParams(1.2, 0.01)


def test_coefficient_examples():
    assert fourier_coeff(SP, 0).value == 0.7
    assert abs(coefficient(SmoothingParams(0.5, 0.05), 2)) < 1e-16


@pytest.mark.parametrize("k", [1, -1, 2, 7, -13, 50])
def test_coefficient_against_quadrature(k):
    # midpoint rule on 1e6 cells; Psi is piecewise linear, so the error is tiny
    L = 10**6
    x = (np.arange(L) + 0.5) / L
    ref = np.mean(psi_smooth(SP, x) * np.exp(-2j * np.pi * k * x))
    assert abs(coefficient(SP, k) - ref) < 1e-9


def test_negative_k_is_conjugate():
    for k in range(1, 30):
        assert coefficient(SP, -k) == pytest.approx(coefficient(SP, k).conjugate(), abs=1e-16)


def test_trig_poly_hand_value():
    sp = SmoothingParams(0.5, 0.05)
    g1 = (1 - cmath.exp(-1j * math.pi)) / (2j * math.pi) * math.sin(2 * math.pi * 0.05) / (2 * math.pi * 0.05)
    assert trig_poly_eval(sp, 1, 0.0) == pytest.approx(0.5 + 2 * g1.real, abs=1e-15)


def test_trig_poly_periodic_and_grid_agree():
    xs = np.linspace(0, 1, 777, endpoint=False)
    a = trig_poly_eval(SP, 300, xs)
    assert np.max(np.abs(a - trig_poly_eval(SP, 300, xs + 1.0))) < 1e-12
    grid = trig_poly_grid(SP, 300, 1000)
    direct = trig_poly_eval(SP, 300, np.arange(1000) / 1000)
    assert np.max(np.abs(grid - direct)) < 1e-12


def test_trig_poly_far_from_jumps():
    sp = SmoothingParams(0.7, 0.01)
    xs = np.array([0.1, 0.3, 0.5, 0.8, 0.95])
    err = np.abs(trig_poly_eval(sp, 10**4, xs) - psi(sp, xs))
    assert np.all(err <= tail_bound(sp, 10**4))


def test_tail_bound_example():
    assert tail_bound(SP, 1000) == pytest.approx(0.002026, abs=1e-6)


def test_exceptional_examples():
    assert exceptional_indicator(SP, 0.025)
    assert not exceptional_indicator(SP, 0.85)
    xs = np.arange(10**6) / 10**6
    assert abs(np.mean(exceptional_indicator(SP, xs)) - 4 * 0.05) <= 1e-5


def test_grid_size_guard():
    with pytest.raises(DomainError):
        trig_poly_grid(SP, 100, 200)


params = st.builds(lambda g, t: SmoothingParams(g, t * min(g, 1 - g, 0.24) / 2),
                   st.floats(0.05, 0.95), st.floats(0.01, 0.99))


@settings(max_examples=60)
@given(params, st.floats(-50, 50, allow_nan=False))
def test_smoothing_properties(sp, x):
    v = psi_smooth(sp, x)
    assert 0.0 <= v <= 1.0
    assert abs(v - psi_smooth(sp, x + 1.0)) < 1e-9
    if not exceptional_indicator(sp, x):
        assert v == psi(sp, x)


@settings(max_examples=30)
@given(params, st.integers(1, 10**5))
def test_coefficient_bound(sp, k):
    assert abs(coefficient(sp, k)) <= coefficient_bound(sp, k) * (1 + 1e-12)
