"""Extreme discrepancy of finite point sets in [0, 1).

D(M) = sup over open intervals I = (a, c) in [0, 1) of |V(I, M)/M - |I||.

With sorted points x_1 <= ... <= x_M the supremum is the largest value
among four families of limiting configurations:

    overfull           (j - i + 1)/M - (x_j - x_i),      i <= j
    underfull interior (x_j - x_i) - (j - i - 1)/M,      i < j
    underfull left     x_j - (j - 1)/M
    underfull right    (1 - x_i) - (M - i)/M

The oracle enumerates the pairs directly; the fast path rewrites the pair
families as prefix minima, which makes it O(M) after sorting.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import as_real
from .errors import DomainError
from .phase import phases_of

ORACLE_MAX = 2000


@dataclass(frozen=True)
class DiscrepancyResult:
    M: int
    value: float | Fraction
    witness: tuple  # (a, c) of the extremal configuration
    interval_count: int
    family: str


def _sorted_points(points):
    if isinstance(points, np.ndarray):
        pts = sorted(points.tolist())
    else:
        pts = sorted(points)
    if not pts:
        raise DomainError("discrepancy of an empty point set")
    for p in pts:
        if not 0 <= p < 1:
            raise DomainError(f"point {p} outside [0, 1)")
    return pts


def discrepancy_oracle(points) -> DiscrepancyResult:
    xs = _sorted_points(points)
    M = len(xs)
    if M > ORACLE_MAX:
        raise DomainError(f"oracle limited to M <= {ORACLE_MAX}")
    one = Fraction(1) if isinstance(xs[0], Fraction) else 1.0
    best = None

    def offer(val, fam, a, c, cnt):
        nonlocal best
        if best is None or val > best[0]:
            best = (val, fam, a, c, cnt)

    for i in range(1, M + 1):
        for j in range(i, M + 1):
            offer(one * (j - i + 1) / M - (xs[j - 1] - xs[i - 1]), "overfull",
                  xs[i - 1], xs[j - 1], j - i + 1)
            if i < j:
                offer((xs[j - 1] - xs[i - 1]) - one * (j - i - 1) / M, "underfull",
                      xs[i - 1], xs[j - 1], j - i - 1)
    for j in range(1, M + 1):
        offer(xs[j - 1] - one * (j - 1) / M, "left", 0 * one, xs[j - 1], j - 1)
        offer((one - xs[j - 1]) - one * (M - j) / M, "right", xs[j - 1], one, M - j)
    val, fam, a, c, cnt = best
    return DiscrepancyResult(M, val, (a, c), cnt, fam)


def _fast_exact(xs: list) -> DiscrepancyResult:
    M = len(xs)
    one = Fraction(1) if isinstance(xs[0], Fraction) else 1.0
    best = None
    min_u = min_w = None  # prefix minima of i/M - x_i (inclusive), x_i - i/M (exclusive)
    arg_u = arg_w = 0
    for j in range(1, M + 1):
        x = xs[j - 1]
        u = one * j / M - x
        if min_u is None or u < min_u:
            min_u, arg_u = u, j
        cands = [(u - min_u + one / M, "overfull", arg_u, j)]
        if min_w is not None:
            cands.append(((x - one * (j - 1) / M) - min_w, "underfull", arg_w, j))
        cands.append((x - one * (j - 1) / M, "left", 0, j))
        cands.append(((one - x) - one * (M - j) / M, "right", j, M + 1))
        for c in cands:
            if best is None or c[0] > best[0]:
                best = c
        w = x - one * j / M
        if min_w is None or w < min_w:
            min_w, arg_w = w, j
    return _result(xs, M, *best, one=one)


def _result(xs, M, val, fam, i, j, one=1.0):
    if fam == "overfull":
        return DiscrepancyResult(M, val, (xs[i - 1], xs[j - 1]), j - i + 1, fam)
    if fam == "underfull":
        return DiscrepancyResult(M, val, (xs[i - 1], xs[j - 1]), j - i - 1, fam)
    if fam == "left":
        return DiscrepancyResult(M, val, (0 * one, xs[j - 1]), j - 1, fam)
    return DiscrepancyResult(M, val, (xs[i - 1], one), M - i, fam)


def _fast_array(x: np.ndarray) -> DiscrepancyResult:
    x = np.sort(np.asarray(x, dtype=np.float64))
    M = x.size
    if M == 0:
        raise DomainError("discrepancy of an empty point set")
    if x[0] < 0 or x[-1] >= 1:
        raise DomainError("points outside [0, 1)")
    idx = np.arange(1, M + 1, dtype=np.float64)
    u = idx / M - x
    over = u - np.minimum.accumulate(u) + 1.0 / M
    w = x - idx / M
    prior_w = np.concatenate(([np.inf], np.minimum.accumulate(w)[:-1]))
    under = (x - (idx - 1) / M) - prior_w
    left = x - (idx - 1) / M
    right = (1.0 - x) - (M - idx) / M
    fams = [("overfull", over), ("underfull", under), ("left", left), ("right", right)]
    best = max(((float(v.max()), k, int(v.argmax())) for k, (_, v) in enumerate(fams)),
               key=lambda t: (t[0], -t[1]))
    val, k, jj = best
    fam = fams[k][0]
    j = jj + 1
    if fam == "overfull":
        i = int(np.argmin(u[:j])) + 1
    elif fam == "underfull":
        i = int(np.argmin(w[:j - 1])) + 1
    elif fam == "left":
        i = 0
    else:
        i, j = j, M + 1
    return _result(x, M, val, fam, i, j)


def discrepancy_fast(points) -> DiscrepancyResult:
    """Same value as the oracle; exact for Fraction input, float64 otherwise."""
    if isinstance(points, np.ndarray) and points.dtype.kind == "f":
        return _fast_array(points)
    pts = list(points)
    if pts and any(isinstance(p, Fraction) for p in pts):
        xs = _sorted_points([Fraction(p) for p in pts])
        return _fast_exact(xs)
    return _fast_array(np.asarray(pts, dtype=np.float64))


def beatty_points(gamma, delta, M: int) -> np.ndarray:
    """Fractional parts {gamma*m + delta} for m = 1..M."""
    return phases_of(as_real(gamma), as_real(delta), np.arange(1, M + 1, dtype=np.int64))


def beatty_discrepancy(gamma, delta, M: int) -> DiscrepancyResult:
    if not 1 <= M <= 10**7:
        raise DomainError("M must lie in [1, 10**7]")
    return _fast_array(beatty_points(gamma, delta, M))


def discrepancy_envelope(tau_hat: float, M: int) -> float:
    if tau_hat < 1 or M < 2:
        raise DomainError("need tau_hat >= 1 and M >= 2")
    return M ** (-1.0 / tau_hat)


def discrepancy_series(gamma, delta, Ms, tau_hat: float) -> list[tuple[int, float, float]]:
    return [(M, float(beatty_discrepancy(gamma, delta, M).value), discrepancy_envelope(tau_hat, M))
            for M in Ms]
