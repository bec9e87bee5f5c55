"""Fractional parts {x*n + s} for many n from a 128-bit fixed-point x.

With X = floor({x} * 2**128) and S likewise, the top 64 bits of
(n*X + S) mod 2**128 are formed in uint64 limbs.  The lowest 32-bit limb only
feeds a carry, so it is dropped: the top word is then off by at most one
unit of 2**-64.  Keeping 53 bits gives {x*n + s} with absolute error at most
2**-53 + 2**-64 + (n*ex + es) * 2**-128 (ex, es the 128-bit error radii).
Requires 0 <= n < 2**31.
"""
from __future__ import annotations

import numpy as np

from .arith import frac_bits
from .errors import DomainError

M64 = (1 << 64) - 1
M32 = np.uint64(0xFFFFFFFF)
SH32 = np.uint64(32)
SH11 = np.uint64(11)
N_LIMIT = 1 << 31


def _split(v: int) -> tuple[np.uint64, np.uint64, np.uint64]:
    lo = v & M64
    return np.uint64(v >> 64), np.uint64(lo >> 32), np.uint64(lo & 0xFFFFFFFF)


def top64(x_bits: int, s_bits: int, ns: np.ndarray) -> np.ndarray:
    """Top 64 bits of (n*x_bits + s_bits) mod 2**128."""
    ns = np.asarray(ns)
    if ns.size and (ns.min() < 0 or ns.max() >= N_LIMIT):
        raise DomainError("phase computation needs 0 <= n < 2**31")
    n = ns.astype(np.uint64, copy=False)
    x2, x1, _ = _split(x_bits)
    s2, s1, _ = _split(s_bits)
    t1 = n * x1
    if s1:
        t1 += s1
    hi = n * x2
    hi += t1 >> SH32
    if s2:
        hi += s2
    return hi


def unit_phases(x_bits: int, s_bits: int, ns: np.ndarray) -> np.ndarray:
    """{n*x + s} in [0, 1) as float64."""
    return (top64(x_bits, s_bits, ns) >> SH11).astype(np.float64) * 2.0**-53


def phases_of(x, shift, ns: np.ndarray) -> np.ndarray:
    xb, _ = frac_bits(x)
    sb, _ = frac_bits(shift)
    return unit_phases(xb, sb, ns)


def phase_error(x, shift, n_max: int) -> float:
    _, ex = frac_bits(x)
    _, es = frac_bits(shift)
    return 2.0**-53 + 2.0**-64 + (n_max * ex + es) * 2.0**-128
