"""Non-homogeneous Beatty sequences B(alpha, beta) = {floor(alpha*m + beta) : m in Z}.

Membership uses the characterization n in B  <=>  0 < {gamma*n + delta} <= gamma
with gamma = 1/alpha and delta = (1 - beta)/alpha.  Writing x_n = gamma*n + delta,
that condition says the half-open window [x_{n-1}, x_n) contains an integer,
so member(n) = ceil(x_n) - ceil(x_{n-1}); this is what the scan evaluates.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import MAX_N, AffineFloor, FixedReal, QuadraticSurd, Real, as_real, unify
from .errors import DomainError

CHUNK = 1 << 20


@dataclass(frozen=True)
class BeattyParams:
    alpha: Real
    beta: Real
    gamma: Real
    delta: Real  # normalized into [0, 1)
    delta_raw: Real  # (1 - beta)/alpha before normalization

    @property
    def precision_mode(self) -> str:
        return "fixed" if isinstance(self.alpha, FixedReal) else "surd"

    def describe(self) -> dict:
        return {"alpha": str(self.alpha) if isinstance(self.alpha, QuadraticSurd) else float(self.alpha),
                "beta": str(self.beta) if isinstance(self.beta, QuadraticSurd) else float(self.beta)}


def derive_params(alpha, beta=0) -> BeattyParams:
    alpha, beta = unify(as_real(alpha), as_real(beta))
    if not alpha > 1:
        raise DomainError(f"alpha must exceed 1, got {float(alpha)}")
    gamma = 1 / alpha
    delta_raw = (1 - beta) * gamma
    delta = delta_raw - delta_raw.floor()
    return BeattyParams(alpha, beta, gamma, delta, delta_raw)


def _ceil_form(params: BeattyParams) -> AffineFloor:
    # floor(-gamma*n - delta) = -ceil(gamma*n + delta)
    return AffineFloor(-params.gamma, -params.delta)


def is_member(params: BeattyParams, n: int) -> bool:
    if not 1 <= n <= MAX_N:
        raise DomainError(f"n must lie in [1, 2**40], got {n}")
    form = _ceil_form(params)
    return form.floor(n - 1) - form.floor(n) == 1


def _member_chunk(form: AffineFloor, lo: int, hi: int) -> np.ndarray:
    c = form.floor_array(np.arange(lo - 1, hi + 1, dtype=np.int64))
    return (c[:-1] - c[1:]).astype(np.bool_)


def membership_mask(params: BeattyParams, N: int, threads: int = 1) -> np.ndarray:
    """Boolean array m with m[n-1] == (n in B) for n = 1..N."""
    if not 1 <= N <= MAX_N:
        raise DomainError(f"N must lie in [1, 2**40], got {N}")
    form = _ceil_form(params)
    bounds = [(lo, min(lo + CHUNK - 1, N)) for lo in range(1, N + 1, CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda b: _member_chunk(form, *b), bounds))
    else:
        parts = [_member_chunk(form, *b) for b in bounds]
    return np.concatenate(parts)


def generate_by_floor(params: BeattyParams, N: int) -> np.ndarray:
    """Members in [1, N] computed as floor(alpha*m + beta) over the needed m."""
    if N < 1:
        raise DomainError("N must be positive")
    # 1 <= alpha*m + beta < N + 1
    m_lo = params.delta_raw.ceil()
    m_hi = ((N + 1 - params.beta) / params.alpha).ceil() - 1
    if m_hi < m_lo:
        return np.zeros(0, dtype=np.int64)
    form = AffineFloor(params.alpha, params.beta)
    return form.floor_array(np.arange(m_lo, m_hi + 1, dtype=np.int64))


def count_members(params: BeattyParams, N: int, method: str = "telescoping") -> int:
    """#{n <= N : n in B}.

    ``telescoping`` sums member(n) = ceil(x_n) - ceil(x_{n-1}) in closed form;
    ``scan`` counts the membership mask.
    """
    if N < 1:
        raise DomainError("N must be positive")
    if method == "scan":
        return int(np.count_nonzero(membership_mask(params, N)))
    if method != "telescoping":
        raise ValueError(f"unknown method {method!r}")
    form = _ceil_form(params)
    return form.floor(0) - form.floor(N)
