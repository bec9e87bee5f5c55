"""Periodic indicator psi of (0, gamma] mod 1 and its trapezoid smoothing.

Psi is psi averaged over a window of half-width Delta, i.e. psi convolved
with the box kernel.  That makes Psi a periodic trapezoid with closed-form
Fourier coefficients

    g(0) = gamma,
    g(k) = (1 - e(-k gamma)) / (2 pi i k) * sin(2 pi k Delta) / (2 pi k Delta),

and explicit bounds |g(k)| <= min(1/(pi|k|), 1/(2 pi^2 Delta k^2)), whose
tail sum over |k| > K is at most 1/(pi^2 Delta K).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi
RESEED = 64


@dataclass(frozen=True)
class SmoothingParams:
    gamma: float
    delta_width: float

    def __post_init__(self):
        g, w = float(self.gamma), float(self.delta_width)
        if not 0.0 < g < 1.0:
            raise DomainError(f"gamma must lie in (0, 1), got {g}")
        if not (0.0 < w < 0.125 and w <= min(g, 1.0 - g) / 2):
            raise DomainError(f"Delta={w} is not admissible for gamma={g}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "delta_width", w)


@dataclass(frozen=True)
class FourierCoefficient:
    k: int
    value: complex


def _frac(x):
    return x - np.floor(x)


def psi(params: SmoothingParams, x):
    f = _frac(np.asarray(x, dtype=np.float64))
    out = ((f > 0.0) & (f <= params.gamma)).astype(np.int8)
    return int(out) if out.ndim == 0 else out


def _primitive(gamma: float, t):
    # measure of (0, t] intersected with the support of psi
    fl = np.floor(t)
    return fl * gamma + np.minimum(t - fl, gamma)


def psi_smooth(params: SmoothingParams, x):
    """Closed-form trapezoid value of Psi(x)."""
    x = np.asarray(x, dtype=np.float64)
    f = _frac(x)  # reduce first so large x keeps full precision
    w = params.delta_width
    ramp = (_primitive(params.gamma, f + w) - _primitive(params.gamma, f - w)) / (2.0 * w)
    # off the ramps the trapezoid is exactly psi; avoid rounding noise there
    g = params.gamma
    on_ramp = (f < w) | ((f > g - w) & (f < g + w)) | (f > 1.0 - w)
    out = np.where(on_ramp, np.clip(ramp, 0.0, 1.0), ((f > 0.0) & (f <= g)).astype(np.float64))
    return float(out) if out.ndim == 0 else out


def coefficient(params: SmoothingParams, k: int) -> complex:
    if k == 0:
        return complex(params.gamma)
    kk = float(k)
    jump = (1.0 - np.exp(-2j * math.pi * ((kk * params.gamma) % 1.0))) / (2j * math.pi * kk)
    z = TWO_PI * kk * params.delta_width
    return complex(jump * (math.sin(z) / z))


def fourier_coeff(params: SmoothingParams, k: int) -> FourierCoefficient:
    return FourierCoefficient(int(k), coefficient(params, int(k)))


def coefficients(params: SmoothingParams, K: int) -> np.ndarray:
    """g(1), ..., g(K) as a complex array (g(-k) is the conjugate)."""
    k = np.arange(1, K + 1, dtype=np.float64)
    phase = (k * params.gamma) % 1.0
    jump = (1.0 - np.exp(-2j * math.pi * phase)) / (2j * math.pi * k)
    z = TWO_PI * k * params.delta_width
    return jump * (np.sin(z) / z)


def coefficient_bound(params: SmoothingParams, k) -> np.ndarray:
    k = np.abs(np.asarray(k, dtype=np.float64))
    return np.minimum(1.0 / (math.pi * k), 1.0 / (2.0 * math.pi**2 * params.delta_width * k * k))


def tail_bound(params: SmoothingParams, K: int) -> float:
    if K < 1:
        raise DomainError("K must be positive")
    return 1.0 / (math.pi**2 * params.delta_width * K)


def trig_poly_eval(params: SmoothingParams, K: int, x, check_residue: bool = True):
    """Psi_K(x) = sum over |k| <= K of g(k) e(kx), by direct summation.

    Powers e(kx) advance by complex rotation and are reseeded from
    exp(2 pi i {kx}) every RESEED steps to keep drift at rounding level.
    """
    if K < 1:
        raise DomainError("K must be positive")
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    f = _frac(np.atleast_1d(x))
    g = coefficients(params, K)
    step = np.exp(TWO_PI * 1j * f)
    pos = np.zeros(f.shape, dtype=np.complex128)
    w = step.copy()
    for k in range(1, K + 1):
        if k % RESEED == 0:
            w = np.exp(TWO_PI * 1j * ((k * f) % 1.0))
        pos += g[k - 1] * w
        w *= step
    # the k < 0 half is the termwise conjugate: g(-k) e(-kx) = conj(g(k) e(kx))
    total = params.gamma + pos + np.conj(pos)
    if check_residue:
        resid = float(np.max(np.abs(total.imag), initial=0.0))
        if resid >= 1e-12:
            raise ArithmeticError(f"imaginary residue {resid:.3g} in symmetric sum")
    out = total.real
    return float(out[0]) if scalar else out


def trig_poly_grid(params: SmoothingParams, K: int, L: int) -> np.ndarray:
    """Psi_K at the L points j/L (L > 2K) via an inverse FFT."""
    if L <= 2 * K:
        raise DomainError("grid size must exceed 2K")
    spectrum = np.zeros(L, dtype=np.complex128)
    g = coefficients(params, K)
    spectrum[0] = params.gamma
    spectrum[1:K + 1] = g
    spectrum[L - K:] = np.conj(g[::-1])
    return np.fft.ifft(spectrum).real * L


def exceptional_indicator(params: SmoothingParams, x):
    """True iff {x} lies in [0, D) u (gamma - D, gamma + D) u (1 - D, 1)."""
    f = _frac(np.asarray(x, dtype=np.float64))
    w, g = params.delta_width, params.gamma
    out = (f < w) | ((f > g - w) & (f < g + w)) | (f > 1.0 - w)
    return bool(out) if out.ndim == 0 else out
