"""Exponential sums S(alpha, f; N) = sum_{n<=N} f(n) e(n alpha), the
Montgomery-Vaughan envelope, the Fourier-side sum H(N), and selection of
convergent denominators in the window [R, N/R]."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import as_real, best_rational_in_range, frac_bits, smallest_convergent_at_least
from .beatty import BeattyParams
from .errors import DomainError
from .multfun import ArithmeticFunction, SieveTable
from .phase import phase_error, unit_phases
from .smoothing import SmoothingParams, coefficient

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
BLOCK = 4096
CHUNK = 1 << 20
MAX_N = 10**8
MV_REPORT_MULTIPLIER = 50.0


@dataclass(frozen=True)
class ExpSumResult:
    alpha: str
    N: int
    value: complex
    accumulation_error: float


@dataclass(frozen=True)
class EnvelopeReport:
    N: int
    R: int
    q: int | None
    a: int | None
    envelope: float
    window_hit: bool
    window: tuple[int, int]


def _values(f, N: int) -> np.ndarray:
    if isinstance(f, ArithmeticFunction):
        f = f.table(N)
    if isinstance(f, SieveTable):
        if f.N < N:
            raise DomainError(f"table covers n <= {f.N}, need {N}")
        f = f.values[:N]
    v = np.asarray(f)
    if v.shape[0] < N:
        raise DomainError("value array shorter than N")
    return v[:N].astype(np.float64, copy=False)


def block_sum(x: np.ndarray) -> float:
    """Pairwise sums over fixed 4096-blocks, then a correctly rounded fsum.

    Order depends only on len(x), so results are reproducible."""
    n = x.size
    pad = (-n) % BLOCK
    if pad:
        x = np.concatenate((x, np.zeros(pad)))
    return math.fsum(x.reshape(-1, BLOCK).sum(axis=1).tolist())


def _support(vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(n, f(n)) restricted to f(n) != 0; zero terms contribute nothing."""
    nz = np.flatnonzero(vals)
    return (nz + 1).astype(np.uint64), vals[nz]


def _chunk_terms(ns, fv, x_bits):
    theta = TWO_PI * unit_phases(x_bits, 0, ns)
    return block_sum(fv * np.cos(theta)), block_sum(fv * np.sin(theta))


def _sum_support(ns: np.ndarray, fv: np.ndarray, x_bits: int, threads: int = 1) -> complex:
    bounds = [(lo, min(lo + CHUNK, ns.size)) for lo in range(0, ns.size, CHUNK)]
    work = lambda b: _chunk_terms(ns[b[0]:b[1]], fv[b[0]:b[1]], x_bits)
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    return complex(math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts))


def _sum_with_bits(vals: np.ndarray, x_bits: int, N: int, threads: int = 1) -> complex:
    ns, fv = _support(vals[:N])
    return _sum_support(ns, fv, x_bits, threads)


def exp_sum(f, alpha, N: int, threads: int = 1) -> ExpSumResult:
    """Direct evaluation with phases from exact 128-bit fractional parts.

    accumulation_error bounds the total floating-point error: per term
    |f(n)| * (2 pi * phase error + trig and product rounding + in-block
    pairwise summation), the block totals being combined by fsum.
    """
    if not 1 <= N <= MAX_N:
        raise DomainError(f"N must lie in [1, {MAX_N}]")
    alpha = as_real(alpha)
    vals = _values(f, N)
    x_bits, _ = frac_bits(alpha)
    value = _sum_with_bits(vals, x_bits, N, threads)
    abs_sum = math.fsum(np.abs(vals).tolist())
    per_term = TWO_PI * phase_error(alpha, 0, N) + (4 + math.log2(BLOCK) + 8) * 2.0**-53
    return ExpSumResult(str(alpha), N, value, abs_sum * per_term)


def envelope_formula(N: float, R: float) -> float:
    return N / math.log(N) + N * math.log(R) ** 1.5 / math.sqrt(R)


def mv_envelope(N: int, R: float) -> float:
    """N/log N + N (log R)^{3/2} / R^{1/2} with unit constant (report only)."""
    if not (2 <= R and R <= N / R):
        raise DomainError(f"R={R} outside [2, N/R] for N={N}")
    return envelope_formula(N, R)


def window_radius(N: int) -> int:
    return math.ceil(math.log(N) ** 3)


def select_convergent_window(x, N: int) -> EnvelopeReport:
    if N < 100:
        raise DomainError("N must be at least 100")
    R = window_radius(N)
    hi = N // R
    found = best_rational_in_range(x, R, hi) if hi >= R else None
    env = envelope_formula(N, R)
    if found is not None:
        return EnvelopeReport(N, R, found[1], found[0], env, True, (R, hi))
    fallback = smallest_convergent_at_least(x, R)
    a, q = fallback if fallback is not None else (None, None)
    return EnvelopeReport(N, R, q, a, env, False, (R, hi))


def k_sweep(gamma, f, N: int, kmax: int, threads: int = 1) -> list[dict]:
    """Per-k rows: |S(k gamma)|, the envelope and the convergent window outcome."""
    gamma = as_real(gamma)
    ns, fv = _support(_values(f, N))
    R = window_radius(N)
    env = envelope_formula(N, R)
    rows = []
    for k in range(1, kmax + 1):
        s = _sum_support(ns, fv, frac_bits(gamma * k)[0], threads)
        rep = select_convergent_window(gamma * k, N) if N >= 100 else None
        hit = bool(rep and rep.window_hit)
        if hit and abs(s) > MV_REPORT_MULTIPLIER * env:
            log.info("k=%d: |S|=%.4g exceeds %g x envelope", k, abs(s), MV_REPORT_MULTIPLIER)
        rows.append({"k": k, "abs_S": abs(s), "envelope": env, "window_hit": hit,
                     "q": rep.q if rep else None})
    return rows


def h_sum(params: BeattyParams, smoothing: SmoothingParams, K: int, f, N: int,
          threads: int = 1, symmetric: bool = True) -> complex:
    """H(N) = sum over 0 < |k| <= K of g(k) e(k delta) S(k gamma, f; N).

    With ``symmetric`` the -k term is taken as the conjugate of the k term,
    which is exact for real-valued f; otherwise it is summed explicitly.
    """
    if K < 1:
        raise DomainError("K must be positive")
    ns, fv = _support(_values(f, N))
    gamma, delta = params.gamma, params.delta

    def term(k: int) -> complex:
        s = _sum_support(ns, fv, frac_bits(gamma * k)[0])
        shift = math.ldexp(frac_bits(delta * k)[0] >> 75, -53)
        return coefficient(smoothing, k) * complex(math.cos(TWO_PI * shift), math.sin(TWO_PI * shift)) * s

    ks = list(range(1, K + 1)) if symmetric else [k for k in range(-K, K + 1) if k]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            terms = list(ex.map(term, ks))
    else:
        terms = [term(k) for k in ks]
    if symmetric:
        terms = terms + [t.conjugate() for t in terms]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
