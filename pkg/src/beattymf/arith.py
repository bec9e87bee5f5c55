"""Exact and certified real arithmetic.

Two representations of real parameters are supported:

* :class:`QuadraticSurd` -- an exact element ``(p + q*sqrt(d))/r`` of a real
  quadratic field (rationals have ``q == 0`` and ``d == 0``).
* :class:`FixedReal` -- a 192-bit fixed-point value with an integer error
  radius, for decimal inputs such as truncated expansions of pi.

Every floor/comparison on a FixedReal is certified; if the error interval
straddles the decision point, :class:`PrecisionExhausted` is raised.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from .errors import DomainError, ParseError, PrecisionExhausted

FRAC_BITS = 192
ONE = 1 << FRAC_BITS
MAX_N = 1 << 40
MAX_DECIMAL_DIGITS = 80


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (s, core) with d = s*s*core.

    Trial division to 10**6, then a perfect-square test on the cofactor, so
    core is squarefree for every radicand below 10**18.
    """
    s, core = 1, 1
    p = 2
    while p * p <= d and p <= 10**6:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            core *= p
        p += 1 if p == 2 else 2
    if d > 1:
        t = math.isqrt(d)
        if t * t == d:
            s *= t
        else:
            core *= d
    return s, core


def _floor_q_sqrt(q: int, d: int) -> int:
    # floor(q*sqrt(d)) for squarefree d >= 2, or d == 0
    if q == 0 or d == 0:
        return 0
    t = math.isqrt(q * q * d)
    return t if q > 0 else -t - 1


def _surd_sign(p: int, q: int, d: int) -> int:
    # sign of p + q*sqrt(d)
    if q == 0 or d == 0:
        return (p > 0) - (p < 0)
    sq = 1 if q > 0 else -1
    if p == 0 or (p > 0) == (q > 0):
        return sq
    return (1 if p > 0 else -1) if p * p > q * q * d else sq


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact value (p + q*sqrt(d))/r, canonicalized on construction."""

    p: int
    q: int = 0
    d: int = 0
    r: int = 1

    def __post_init__(self):
        p, q, d, r = int(self.p), int(self.q), int(self.d), int(self.r)
        if r == 0:
            raise DomainError("zero denominator")
        if q != 0:
            if d < 0:
                raise DomainError(f"negative radicand {d}")
            if d == 0:
                q = 0
            else:
                s, d = _squarefree_split(d)
                q *= s
                if d == 1:
                    p, q, d = p + q, 0, 0
        if q == 0:
            d = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", r)

    @classmethod
    def rational(cls, value) -> QuadraticSurd:
        f = Fraction(value)
        return cls(f.numerator, 0, 0, f.denominator)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def __repr__(self) -> str:
        if self.q == 0:
            return f"QuadraticSurd({self.p}/{self.r})"
        return f"QuadraticSurd(({self.p}{self.q:+d}*sqrt({self.d}))/{self.r})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p) if self.r == 1 else f"{self.p}/{self.r}"
        return f"({self.p}{self.q:+d}*sqrt({self.d}))/{self.r}"

    def sign(self) -> int:
        return _surd_sign(self.p, self.q, self.d)

    def floor(self) -> int:
        return (self.p + _floor_q_sqrt(self.q, self.d)) // self.r

    def ceil(self) -> int:
        return -(-self).floor()

    def scaled_floor(self, bits: int) -> int:
        """floor(self * 2**bits)."""
        return ((self.p << bits) + _floor_q_sqrt(self.q << bits, self.d)) // self.r

    def __float__(self) -> float:
        return float(Fraction(self.scaled_floor(128), 1 << 128))

    # --- field arithmetic -------------------------------------------------
    def _merge(self, other: QuadraticSurd) -> int:
        if self.d and other.d and self.d != other.d:
            raise DomainError(f"mismatched radicands {self.d} and {other.d}")
        return self.d or other.d

    def __neg__(self) -> QuadraticSurd:
        return QuadraticSurd(-self.p, -self.q, self.d, self.r)

    def __add__(self, other):
        other = _as_surd(other)
        if other is None:
            return NotImplemented
        d = self._merge(other)
        return QuadraticSurd(self.p * other.r + other.p * self.r,
                             self.q * other.r + other.q * self.r, d, self.r * other.r)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_surd(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_surd(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_surd(other)
        if other is None:
            return NotImplemented
        d = self._merge(other)
        return QuadraticSurd(self.p * other.p + self.q * other.q * d,
                             self.p * other.q + self.q * other.p, d, self.r * other.r)

    __rmul__ = __mul__

    def invert(self) -> QuadraticSurd:
        norm = self.p * self.p - self.q * self.q * self.d
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticSurd(self.p * self.r, -self.q * self.r, self.d, norm)

    def __truediv__(self, other):
        other = _as_surd(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = _as_surd(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def _cmp(self, other) -> int:
        o = _as_surd(other)
        if o is None:
            raise TypeError(f"cannot compare QuadraticSurd with {type(other).__name__}")
        return (self - o).sign()

    def __eq__(self, other):
        o = _as_surd(other)
        if o is None:
            return NotImplemented
        # canonical form makes equality structural
        return (self.p, self.q, self.d, self.r) == (o.p, o.q, o.d, o.r)

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.d, self.r))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


def _as_surd(x) -> QuadraticSurd | None:
    if isinstance(x, QuadraticSurd):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return QuadraticSurd.rational(x)
    return None


@dataclass(frozen=True)
class FixedReal:
    """x with |x - mantissa * 2**-192| <= err * 2**-192."""

    mantissa: int
    err: int = 1

    @classmethod
    def from_decimal(cls, text: str) -> FixedReal:
        s = text.strip()
        if not _DECIMAL_RE.fullmatch(s):
            raise ParseError(f"not a decimal literal: {text!r}")
        digits = re.sub(r"[eE].*$", "", s).lstrip("+-").replace(".", "").lstrip("0")
        if len(digits) > MAX_DECIMAL_DIGITS:
            raise ParseError(f"more than {MAX_DECIMAL_DIGITS} significant digits")
        return cls._from_fraction(Fraction(s))

    @classmethod
    def _from_fraction(cls, f: Fraction) -> FixedReal:
        num = f.numerator << FRAC_BITS
        m, rem = divmod(num, f.denominator)
        return cls(m, 0 if rem == 0 else 1)

    @classmethod
    def from_value(cls, x) -> FixedReal:
        if isinstance(x, FixedReal):
            return x
        if isinstance(x, QuadraticSurd):
            if x.is_rational:
                return cls._from_fraction(Fraction(x.p, x.r))
            return cls(x.scaled_floor(FRAC_BITS), 1)
        if isinstance(x, (int, Fraction)):
            return cls._from_fraction(Fraction(x))
        if isinstance(x, float):
            return cls._from_fraction(Fraction(x))
        raise TypeError(f"cannot convert {type(x).__name__} to FixedReal")

    @property
    def err_bound(self) -> float:
        return math.ldexp(self.err, -FRAC_BITS)

    def interval(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.mantissa - self.err, ONE), Fraction(self.mantissa + self.err, ONE))

    def __float__(self) -> float:
        return float(Fraction(self.mantissa, ONE))

    def __repr__(self) -> str:
        return f"FixedReal({float(self)!r} +/- {self.err_bound:.3g})"

    def floor(self) -> int:
        lo = (self.mantissa - self.err) >> FRAC_BITS
        hi = (self.mantissa + self.err) >> FRAC_BITS
        if lo != hi:
            raise PrecisionExhausted(f"floor of {self!r} is not certified")
        return lo

    def ceil(self) -> int:
        return -(-self).floor()

    def sign(self) -> int:
        if self.mantissa > self.err:
            return 1
        if self.mantissa < -self.err:
            return -1
        if self.mantissa == 0 and self.err == 0:
            return 0
        raise PrecisionExhausted(f"sign of {self!r} is not certified")

    def __neg__(self) -> FixedReal:
        return FixedReal(-self.mantissa, self.err)

    def __add__(self, other):
        o = _as_fixed(other)
        if o is None:
            return NotImplemented
        return FixedReal(self.mantissa + o.mantissa, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_fixed(other)
        if o is None:
            return NotImplemented
        return FixedReal(self.mantissa - o.mantissa, self.err + o.err)

    def __rsub__(self, other):
        o = _as_fixed(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return FixedReal(self.mantissa * other, self.err * abs(other))
        o = _as_fixed(other)
        if o is None:
            return NotImplemented
        prod = self.mantissa * o.mantissa
        m = (prod + (ONE >> 1)) >> FRAC_BITS
        e = abs(self.mantissa) * o.err + abs(o.mantissa) * self.err + self.err * o.err
        return FixedReal(m, -(-e >> FRAC_BITS) + 1)

    __rmul__ = __mul__

    def invert(self) -> FixedReal:
        a = abs(self.mantissa)
        if a <= self.err:
            raise PrecisionExhausted(f"cannot invert {self!r}: interval contains 0")
        m = ((ONE * ONE) + (a >> 1)) // a
        if self.mantissa < 0:
            m = -m
        # |1/x - 1/m'| <= e / (|m'| (|m'| - e)) in real units
        e = -(-(self.err * ONE * ONE) // (a * (a - self.err))) + 1
        return FixedReal(m, e)

    def __truediv__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            m = (self.mantissa + abs(other) // 2) // other
            return FixedReal(m, -(-self.err // abs(other)) + 1)
        o = _as_fixed(other)
        if o is None:
            return NotImplemented
        return self * o.invert()

    def __rtruediv__(self, other):
        o = _as_fixed(other)
        if o is None:
            return NotImplemented
        return o * self.invert()

    def _cmp(self, other) -> int:
        o = _as_fixed(other)
        if o is None:
            raise TypeError(f"cannot compare FixedReal with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


def _as_fixed(x) -> FixedReal | None:
    if isinstance(x, FixedReal):
        return x
    if isinstance(x, (QuadraticSurd, int, Fraction)) and not isinstance(x, bool):
        return FixedReal.from_value(x)
    return None


Real = Union[QuadraticSurd, FixedReal]


def as_real(x) -> Real:
    """Coerce int/Fraction/float to an exact rational surd; pass reals through."""
    if isinstance(x, (QuadraticSurd, FixedReal)):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite value {x}")
        return QuadraticSurd.rational(Fraction(x))
    if isinstance(x, (int, Fraction)):
        return QuadraticSurd.rational(x)
    raise TypeError(f"unsupported real type {type(x).__name__}")


def unify(*xs) -> tuple[Real, ...]:
    """Bring values to a common representation (FixedReal wins)."""
    xs = tuple(as_real(x) for x in xs)
    if any(isinstance(x, FixedReal) for x in xs):
        return tuple(FixedReal.from_value(x) for x in xs)
    return xs


# --- parsing ---------------------------------------------------------------

_INT = r"[+-]?\d+"
_FULL_RE = re.compile(
    r"\(\s*(?P<p>[+-]?\d+)\s*(?P<s>[+-])\s*(?:(?P<q>\d+)\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\)\s*\)"
    r"(?:\s*/\s*(?P<r>[+-]?\d+))?"
)
_SQRT_RE = re.compile(
    r"(?P<sign>[+-]?)\s*(?:(?P<q>\d+)\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\)(?:\s*/\s*(?P<r>[+-]?\d+))?"
)
_RATIO_RE = re.compile(rf"(?P<n>{_INT})\s*/\s*(?P<m>{_INT})")
_DECIMAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def parse_surd(text: str) -> QuadraticSurd:
    """Parse ``(p+q*sqrt(d))/r``, ``sqrt(d)``, ``INT``, ``INT/INT`` or a decimal literal.

    Decimal literals are read as the exact rational they denote.
    """
    s = text.strip()
    if m := _FULL_RE.fullmatch(s):
        q = int(m["q"] or 1) * (-1 if m["s"] == "-" else 1)
        r = int(m["r"]) if m["r"] is not None else 1
        return QuadraticSurd(int(m["p"]), q, int(m["d"]), r)
    if m := _SQRT_RE.fullmatch(s):
        q = int(m["q"] or 1) * (-1 if m["sign"] == "-" else 1)
        return QuadraticSurd(0, q, int(m["d"]), int(m["r"]) if m["r"] is not None else 1)
    if m := _RATIO_RE.fullmatch(s):
        return QuadraticSurd(int(m["n"]), 0, 0, int(m["m"]))
    if _DECIMAL_RE.fullmatch(s):
        digits = re.sub(r"[eE].*$", "", s).lstrip("+-").replace(".", "").lstrip("0")
        if len(digits) > MAX_DECIMAL_DIGITS:
            raise ParseError(f"more than {MAX_DECIMAL_DIGITS} significant digits")
        return QuadraticSurd.rational(Fraction(s))
    raise ParseError(f"cannot parse real value {text!r}")


def parse_real(text: str, decimal: str = "exact") -> Real:
    """Parse a real; with ``decimal='fixed'`` decimal literals become FixedReal."""
    s = text.strip()
    if decimal == "fixed" and _DECIMAL_RE.fullmatch(s) and not re.fullmatch(_INT, s):
        return FixedReal.from_decimal(s)
    return parse_surd(s)


# --- fractional parts and exact affine floors ------------------------------

def frac_exact(x: QuadraticSurd, n: int, shift=0) -> QuadraticSurd:
    """Exact {x*n + shift} as a surd in [0, 1)."""
    y = as_real(x) * n + as_real(shift)
    return y - y.floor()


def frac_part(x, n: int, shift=0) -> FixedReal:
    """{x*n + shift} as a certified FixedReal in [0, 1)."""
    if not 1 <= n <= MAX_N:
        raise DomainError(f"n must lie in [1, 2**40], got {n}")
    x, shift = unify(x, shift)
    if isinstance(x, QuadraticSurd):
        return FixedReal.from_value(frac_exact(x, n, shift))
    y = x * n + shift
    return y - y.floor()


def frac_bits(x, bits: int = 128) -> tuple[int, int]:
    """(floor({x} * 2**bits), error radius in units of 2**-bits)."""
    x = as_real(x)
    mod = 1 << bits
    if isinstance(x, QuadraticSurd):
        return x.scaled_floor(bits) % mod, 1
    shift = FRAC_BITS - bits
    return (x.mantissa >> shift) % mod, (x.err >> shift) + 2


class AffineFloor:
    """Exact floor(a*n + b) for integer n, scalar or vectorized.

    The vectorized path evaluates in float64 and re-decides exactly every
    entry whose float value lies within a guard band of an integer.
    """

    def __init__(self, a, b):
        a, b = unify(a, b)
        self.a, self.b = a, b
        self.af, self.bf = float(a), float(b)
        if isinstance(a, QuadraticSurd):
            d = a.d or b.d
            if a.d and b.d and a.d != b.d:
                raise DomainError("mismatched radicands")
            self._surd = (a.p * b.r, b.p * a.r, a.q * b.r, b.q * a.r, a.r * b.r, d)
        else:
            self._surd = None

    def floor(self, n: int) -> int:
        n = int(n)
        if self._surd is not None:
            u1, u0, v1, v0, c, d = self._surd
            return (u1 * n + u0 + _floor_q_sqrt(v1 * n + v0, d)) // c
        val = self.a.mantissa * n + self.b.mantissa
        e = self.a.err * abs(n) + self.b.err
        lo, hi = (val - e) >> FRAC_BITS, (val + e) >> FRAC_BITS
        if lo != hi:
            raise PrecisionExhausted(f"floor(a*{n}+b) is not certified")
        return lo

    def floor_array(self, ns: np.ndarray) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size == 0:
            return np.zeros(0, dtype=np.int64)
        nmax = float(np.max(np.abs(ns)))
        scale = abs(self.af) * nmax + abs(self.bf) + 1.0
        if scale > 2.0**50:
            return np.array([self.floor(int(n)) for n in ns], dtype=np.int64)
        x = self.af * ns.astype(np.float64) + self.bf
        fl = np.floor(x)
        margin = math.ldexp(scale, -40)
        out = fl.astype(np.int64)
        near = np.flatnonzero((x - fl < margin) | (fl + 1.0 - x < margin))
        for i in near:
            out[i] = self.floor(int(ns[i]))
        return out


# --- continued fractions ---------------------------------------------------

@dataclass
class ContinuedFraction:
    quotients: list[int]
    convergents: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.convergents:
            self.convergents = convergents_from_quotients(self.quotients)


def convergents_from_quotients(quotients) -> list[tuple[int, int]]:
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1  # (p_{-1}, q_{-1}), (p_{-2}, q_{-2})
    for a in quotients:
        p, q = a * p0 + p1, a * q0 + q1
        out.append((p, q))
        p1, q1, p0, q0 = p0, q0, p, q
    return out


def _surd_quotients(x: QuadraticSurd) -> Iterator[int]:
    # x = (P + sqrt(D))/Q with Q | D - P^2; integer-only state
    if x.q > 0:
        P, D, Q = x.p, x.q * x.q * x.d, x.r
    else:
        P, D, Q = -x.p, x.q * x.q * x.d, -x.r
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = math.isqrt(D)
    while True:
        a = (P + s) // Q if Q > 0 else (-P - s - 1) // (-Q)
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def _fraction_quotients(f: Fraction) -> Iterator[int]:
    n, d = f.numerator, f.denominator
    while d:
        a = n // d
        yield a
        n, d = d, n - a * d


def _fixed_quotients(x: FixedReal) -> Iterator[int]:
    lo, hi = x.interval()
    for a, b in zip(_fraction_quotients(lo), _fraction_quotients(hi)):
        if a != b:
            break
        yield a
    raise PrecisionExhausted("FixedReal precision cannot certify further partial quotients")


def iter_quotients(x) -> Iterator[int]:
    x = as_real(x)
    if isinstance(x, FixedReal):
        return _fixed_quotients(x)
    if x.is_rational:
        return _fraction_quotients(Fraction(x.p, x.r))
    return _surd_quotients(x)


def iter_convergents(x) -> Iterator[tuple[int, int, int]]:
    """Yield (a_i, p_i, q_i)."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in iter_quotients(x):
        p, q = a * p0 + p1, a * q0 + q1
        yield a, p, q
        p1, q1, p0, q0 = p0, q0, p, q


def cf_expand(x, count: int) -> ContinuedFraction:
    if count < 1:
        raise DomainError("count must be positive")
    x = as_real(x)
    if isinstance(x, QuadraticSurd) and x.is_rational:
        raise DomainError("cf_expand expects an irrational value")
    quotients = []
    for a in iter_quotients(x):
        quotients.append(a)
        if len(quotients) == count:
            break
    return ContinuedFraction(quotients)


def best_rational_in_range(x, q_min: int, q_max: int) -> tuple[int, int] | None:
    """First convergent a/q of x with q_min <= q <= q_max, or None."""
    if q_min < 2:
        raise DomainError("q_min must be at least 2")
    for _, p, q in iter_convergents(x):
        if q > q_max:
            return None
        if q >= q_min:
            return p, q
    return None


def smallest_convergent_at_least(x, q_min: int) -> tuple[int, int] | None:
    for _, p, q in iter_convergents(x):
        if q >= q_min:
            return p, q
    return None


@dataclass(frozen=True)
class TypeWitness:
    depth: int
    tau_hat: float
    per_index_ratios: tuple[float, ...]


def estimate_type(cf: ContinuedFraction) -> TypeWitness:
    """Denominator-growth estimate of the irrationality type.

    ratio_i = log q_{i+1} / log q_i for i >= 1 (infinite when q_i = 1).
    tau_hat is the max over the trailing half of the ratios, so the
    estimate tracks the limsup rather than small-index transients.
    """
    qs = [q for _, q in cf.convergents]
    if len(qs) < 3:
        raise DomainError("estimate_type needs at least 3 convergents")
    ratios = []
    for i in range(1, len(qs) - 1):
        ratios.append(math.inf if qs[i] <= 1 else math.log(qs[i + 1]) / math.log(qs[i]))
    tail = ratios[len(ratios) // 2:]
    return TypeWitness(len(qs), max(tail), tuple(ratios))
