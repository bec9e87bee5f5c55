"""Arithmetic functions, sieves and constants for the two-squares, k-free
and four-squares applications."""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import CapacityError, DomainError

MAX_INDICATOR_N = 10**8
MAX_R4_N = 10**7
HEADER = struct.Struct("<4sHHQ")
MAGIC = b"BMFT"

FUNCTION_IDS = ("unit", "two_squares", "k_free", "r4", "r4_over_8n", "sigma", "moebius_abs")
_ID_CODE = {name: i for i, name in enumerate(FUNCTION_IDS)}
_DTYPE = {"unit": np.uint8, "two_squares": np.uint8, "k_free": np.uint8, "moebius_abs": np.uint8,
          "r4": np.int64, "sigma": np.int64, "r4_over_8n": np.float64}


def _check_capacity(N: int, limit: int):
    if N < 1:
        raise DomainError("N must be positive")
    if N > limit:
        raise CapacityError(f"N={N} exceeds capacity {limit}")


# --- prime infrastructure --------------------------------------------------

def prime_mask(N: int) -> np.ndarray:
    """is_prime[n] for 0 <= n <= N."""
    mask = np.ones(N + 1, dtype=np.bool_)
    mask[:2] = False
    for p in range(2, math.isqrt(N) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return mask


def primes_upto(N: int) -> np.ndarray:
    if N < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(prime_mask(N))


def spf_sieve(N: int) -> np.ndarray:
    """Smallest prime factor of every n <= N (spf[0] = 0, spf[1] = 1)."""
    spf = np.zeros(N + 1, dtype=np.int32)
    for p in primes_upto(math.isqrt(N)):
        block = spf[p * p::p]
        block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


# --- tables ----------------------------------------------------------------

@dataclass
class SieveTable:
    """values[n - 1] = f(n) for n = 1..N."""

    id: str
    N: int
    values: np.ndarray
    method: str
    k: int = 0

    def at(self, n: int):
        return self.values[n - 1]

    def dump(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(HEADER.pack(MAGIC, _ID_CODE[self.id], self.k, self.N))
            fh.write(np.ascontiguousarray(self.values, dtype=_DTYPE[self.id]).tobytes())

    @classmethod
    def load(cls, path) -> SieveTable:
        raw = Path(path).read_bytes()
        magic, code, k, N = HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a sieve table")
        fid = FUNCTION_IDS[code]
        values = np.frombuffer(raw, dtype=_DTYPE[fid], offset=HEADER.size).copy()
        if values.size != N:
            raise ValueError(f"{path}: truncated table")
        return cls(fid, N, values, "loaded", k)


def sieve_two_squares(N: int, method: str = "mark_sum_of_squares") -> SieveTable:
    """Indicator of n = a^2 + b^2 with a, b >= 0."""
    _check_capacity(N, MAX_INDICATOR_N)
    if method == "mark_sum_of_squares":
        out = np.zeros(N + 1, dtype=np.uint8)
        for a in range(math.isqrt(N) + 1):
            b = np.arange(a, math.isqrt(N - a * a) + 1, dtype=np.int64)
            out[a * a + b * b] = 1
        vals = out[1:]
    elif method == "factor_criterion":
        vals = _two_squares_by_factoring(N)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SieveTable("two_squares", N, vals, method)


def _two_squares_by_factoring(N: int) -> np.ndarray:
    # n is a sum of two squares iff every prime p = 3 mod 4 divides n to an even power
    spf = spf_sieve(N)
    n = np.arange(1, N + 1, dtype=np.int64)
    good = np.ones(N, dtype=np.uint8)
    idx = np.flatnonzero(n > 1)
    m = n[idx].copy()
    cur = np.zeros(idx.size, dtype=np.int64)
    par = np.zeros(idx.size, dtype=np.int8)
    while idx.size:
        p = spf[m].astype(np.int64)
        m //= p
        same = p == cur
        closing = ~same & (cur % 4 == 3) & (par == 1)
        good[idx[closing]] = 0
        par = np.where(same, par ^ 1, 1).astype(np.int8)
        cur = p
        done = m == 1
        finished = done & (cur % 4 == 3) & (par == 1)
        good[idx[finished]] = 0
        keep = ~done
        idx, m, cur, par = idx[keep], m[keep], cur[keep], par[keep]
    return good


def sieve_kfree(N: int, k: int) -> SieveTable:
    if k < 2:
        raise DomainError("k must be at least 2")
    _check_capacity(N, MAX_INDICATOR_N)
    vals = np.ones(N, dtype=np.uint8)
    for p in primes_upto(int(round(N ** (1.0 / k))) + 1):
        pk = int(p) ** k
        if pk > N:
            break
        vals[pk - 1::pk] = 0
    return SieveTable("k_free", N, vals, "crossing_out", k)


def moebius_table(N: int) -> np.ndarray:
    """mu(n) for n = 0..N (mu[0] = 0)."""
    mu = np.ones(N + 1, dtype=np.int8)
    prod = np.ones(N + 1, dtype=np.int64)
    for p in primes_upto(math.isqrt(N)):
        p = int(p)
        mu[p::p] *= -1
        prod[p::p] *= p
        mu[p * p::p * p] = 0
    n = np.arange(N + 1)
    big = (prod != n) & (mu != 0)  # one remaining prime factor above sqrt(N)
    mu[big] *= -1
    mu[0] = 0
    return mu


def sieve_moebius_abs(N: int) -> SieveTable:
    _check_capacity(N, MAX_INDICATOR_N)
    return SieveTable("moebius_abs", N, (moebius_table(N)[1:] != 0).astype(np.uint8), "moebius_sieve")


def kfree_count_moebius(N: int, k: int) -> int:
    """sum over d with d^k <= N of mu(d) * floor(N / d^k)."""
    D = int(round(N ** (1.0 / k))) + 1
    while D**k > N:
        D -= 1
    mu = moebius_table(max(D, 1))
    return sum(int(mu[d]) * (N // d**k) for d in range(1, D + 1))


def _divisor_sum_table(N: int, odd_only: bool) -> np.ndarray:
    # each n = d*e with d <= e is visited once per d <= sqrt(n), adding d and e
    s = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, math.isqrt(N) + 1):
        e = np.arange(d, N // d + 1, dtype=np.int64)
        n = d * e
        if not odd_only or d % 2:
            s[n] += d
        mask = e != d
        if odd_only:
            mask &= (e % 2) == 1
        s[n[mask]] += e[mask]
    return s


def sigma_table(N: int) -> SieveTable:
    _check_capacity(N, MAX_R4_N)
    return SieveTable("sigma", N, _divisor_sum_table(N, False)[1:], "divisor_sieve")


def sieve_r4(N: int) -> SieveTable:
    _check_capacity(N, MAX_R4_N)
    odd = _divisor_sum_table(N, True)[1:]
    n = np.arange(1, N + 1)
    vals = 8 * np.where(n % 2 == 0, 3, 1) * odd
    return SieveTable("r4", N, vals.astype(np.int64), "divisor_sieve")


def r4_jacobi(n: int) -> int:
    if n < 1:
        raise DomainError("n must be positive")
    s = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            e = n // d
            if d % 2:
                s += d
            if e != d and e % 2:
                s += e
    return 8 * (2 + (-1) ** n) * s


def _r2_counts(N: int) -> np.ndarray:
    # r2[m] = #{(a, b) in Z^2 : a^2 + b^2 = m}
    r2 = np.zeros(N + 1, dtype=np.int64)
    s = math.isqrt(N)
    for a in range(-s, s + 1):
        t = math.isqrt(N - a * a)
        b = np.arange(-t, t + 1, dtype=np.int64)
        np.add.at(r2, a * a + b * b, 1)
    return r2


def r4_lattice_oracle(n: int) -> int:
    """Count (a, b, c, d) in Z^4 with a^2+b^2+c^2+d^2 = n."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > 10**5:
        raise CapacityError("lattice oracle limited to n <= 10**5")
    r2 = _r2_counts(n)
    return int(np.dot(r2, r2[::-1]))


def r4_lattice_table(N: int) -> np.ndarray:
    """r4(n) for n = 0..N by convolving two-square counts."""
    if N > 10**5:
        raise CapacityError("lattice oracle limited to N <= 10**5")
    r2 = _r2_counts(N)
    return np.convolve(r2, r2)[:N + 1]


def sigma_sq_sum(N: int) -> int:
    """Exact sum of sigma(n)^2 for n <= N."""
    sig = sigma_table(N).values
    total = 0
    for lo in range(0, N, 1024):
        chunk = sig[lo:lo + 1024]
        total += int(np.dot(chunk, chunk))
    return total


# --- constants -------------------------------------------------------------

def landau_constant(prime_cutoff: int) -> tuple[float, float]:
    """2^{-1/2} prod_{p = 3 mod 4, p <= cutoff} (1 - p^-2)^{-1/2} and a tail bound.

    The omitted factors multiply C by at most exp(0.5 * 9/8 * sum_{n > x} n^-2)
    <= exp(0.5625 / x); the returned bound is C * (exp(0.5625/x) - 1).
    """
    if prime_cutoff < 1000:
        raise DomainError("prime cutoff must be at least 1000")
    p = primes_upto(prime_cutoff)
    p = p[p % 4 == 3].astype(np.float64)
    log_prod = -0.5 * math.fsum(np.log1p(-1.0 / (p * p)).tolist())
    C = math.exp(-0.5 * math.log(2.0) + log_prod)
    return C, C * math.expm1(0.5625 / prime_cutoff)


def zeta_int(s: int, tol: float = 1e-12, cutoff: int | None = None) -> float:
    """zeta(s) for integer s >= 2: partial sum to M plus the midpoint of the
    integral bracket [(M+1)^{1-s}, M^{1-s}]/(s-1) for the tail."""
    if s < 2:
        raise DomainError("s must be at least 2")
    M = cutoff if cutoff is not None else max(10, math.ceil((2.0 * tol) ** (-1.0 / s)))
    n = np.arange(1, M + 1, dtype=np.float64)
    head = math.fsum((n ** -float(s)).tolist())
    hi = M ** (1.0 - s) / (s - 1)
    lo = (M + 1) ** (1.0 - s) / (s - 1)
    return head + (hi + lo) / 2.0


# --- function objects ------------------------------------------------------

@dataclass(frozen=True)
class ArithmeticFunction:
    id: str
    k: int = 0
    class_bound_A: float | None = None

    def __post_init__(self):
        if self.id not in FUNCTION_IDS:
            raise DomainError(f"unknown function {self.id!r}")
        if self.id == "k_free" and self.k < 2:
            raise DomainError("k_free needs k >= 2")

    @property
    def label(self) -> str:
        return f"k_free({self.k})" if self.id == "k_free" else self.id

    @property
    def integer_valued(self) -> bool:
        return self.id != "r4_over_8n"

    def table(self, N: int, method: str | None = None) -> SieveTable:
        if self.id == "unit":
            _check_capacity(N, MAX_INDICATOR_N)
            return SieveTable("unit", N, np.ones(N, dtype=np.uint8), "constant")
        if self.id == "two_squares":
            return sieve_two_squares(N, method or "mark_sum_of_squares")
        if self.id == "k_free":
            return sieve_kfree(N, self.k)
        if self.id == "moebius_abs":
            return sieve_moebius_abs(N)
        if self.id == "r4":
            return sieve_r4(N)
        if self.id == "sigma":
            return sigma_table(N)
        r4 = sieve_r4(N)
        vals = r4.values / (8.0 * np.arange(1, N + 1))
        return SieveTable("r4_over_8n", N, vals, r4.method)

    def exact_value(self, n: int) -> Fraction:
        if self.id == "r4_over_8n":
            return Fraction(r4_jacobi(n), 8 * n)
        if self.id == "r4":
            return Fraction(r4_jacobi(n))
        return Fraction(int(self.table(n).values[-1]))


def function_by_name(name: str, k: int = 2) -> ArithmeticFunction:
    aliases = {"kfree": "k_free", "two-squares": "two_squares", "twosquares": "two_squares",
               "r4-over-8n": "r4_over_8n", "squarefree": "moebius_abs"}
    fid = aliases.get(name, name)
    bounds = {"unit": 1.0, "two_squares": 1.0, "k_free": 1.0, "moebius_abs": 1.0, "r4_over_8n": 4.0}
    return ArithmeticFunction(fid, k if fid == "k_free" else 0, bounds.get(fid))


def mean_square(table: SieveTable) -> float:
    v = table.values.astype(np.float64)
    return math.fsum((v * v).tolist()) / table.N


def class_check(f: ArithmeticFunction | SieveTable, N: int, A: float) -> bool:
    """sum_{n<=N} |f(n)|^2 <= A^2 N and |f(p)| <= A at every prime p <= N."""
    table = f if isinstance(f, SieveTable) else f.table(N)
    vals = table.values[:N].astype(np.float64)
    if math.fsum((vals * vals).tolist()) > A * A * N:
        return False
    p = primes_upto(N)
    return bool(np.all(np.abs(vals[p - 1]) <= A))
