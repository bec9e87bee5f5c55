"""Theorem-level sums G(alpha, beta, f; N) over a Beatty sequence, the
smoothing/Fourier decomposition audit, and the three corollary reports."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .arith import QuadraticSurd
from .beatty import BeattyParams, generate_by_floor, membership_mask
from .discrepancy import _fast_array
from .errors import DomainError
from .expsum import block_sum, h_sum
from .multfun import ArithmeticFunction, SieveTable, kfree_count_moebius, landau_constant, zeta_int
from .phase import phases_of
from .smoothing import SmoothingParams, exceptional_indicator, tail_bound, trig_poly_eval

AUDIT_MAX_N = 10**5
CHUNK = 1 << 20


@dataclass(frozen=True)
class HarnessConfig:
    delta_width: float
    K: int
    R: int
    clamped: bool = False

    @classmethod
    def for_N(cls, N: int, gamma: float, delta_width: float | None = None, K: int | None = None) -> HarnessConfig:
        if N < 16:
            raise DomainError("N must be at least 16")
        L = math.log(N)
        w = delta_width if delta_width is not None else L**-2
        cap = min(gamma, 1.0 - gamma) / 2
        clamped = False
        if not (w < 0.125 and w <= cap):
            w, clamped = min(cap, 0.12), True
        return cls(w, K if K is not None else math.ceil(L**3), math.ceil(L**3), clamped)

    def smoothing(self, gamma: float) -> SmoothingParams:
        return SmoothingParams(gamma, self.delta_width)


def theorem_envelope(N: int) -> float:
    if N < 16:
        raise DomainError("envelope needs N >= 16")
    return N * math.log(math.log(N)) / math.log(N)


def _table(f, N: int) -> SieveTable:
    return f if isinstance(f, SieveTable) else f.table(N)


def _exact_sum(vals: np.ndarray):
    """Sum with Python-int accumulation for integer arrays."""
    if vals.dtype.kind in "iub":
        return sum(int(np.sum(vals[i:i + CHUNK], dtype=np.int64)) for i in range(0, vals.size, CHUNK))
    return block_sum(vals.astype(np.float64))


def beatty_sum(params: BeattyParams, f, N: int, threads: int = 1, via: str = "scan"):
    """G = sum of f(n) over members n <= N, exact for integer-valued f."""
    vals = _table(f, N).values[:N]
    if via == "scan":
        return _exact_sum(vals[membership_mask(params, N, threads)])
    if via == "floor":
        return _exact_sum(vals[generate_by_floor(params, N) - 1])
    raise ValueError(f"unknown route {via!r}")


def _times_gamma(params: BeattyParams, total) -> float:
    if isinstance(total, int) and isinstance(params.gamma, QuadraticSurd):
        return float(params.gamma * total)
    return float(params.gamma) * float(total)


@dataclass
class AuditReport:
    N: int
    K: int
    delta_width: float
    G: float
    smoothed_direct: float
    fourier_side: complex
    residual: float
    smoothing_gap: float
    smoothing_budget: float
    boundary_set_size: int


def decomposition_audit(params: BeattyParams, f, N: int, cfg: HarnessConfig | None = None,
                        threads: int = 1) -> AuditReport:
    """Compute G, sum f(n) Psi_K(x_n) directly, and gamma*sum f + H(N) on the
    Fourier side; the residual between the last two must vanish."""
    if N > AUDIT_MAX_N:
        raise DomainError(f"audit limited to N <= {AUDIT_MAX_N}")
    gamma = float(params.gamma)
    cfg = cfg or HarnessConfig.for_N(N, gamma)
    sm = cfg.smoothing(gamma)
    table = _table(f, N)
    vals = table.values[:N].astype(np.float64)
    G = float(beatty_sum(params, table, N, threads))
    x = phases_of(params.gamma, params.delta, np.arange(1, N + 1, dtype=np.int64))
    nz = np.flatnonzero(vals)
    direct = block_sum(vals[nz] * trig_poly_eval(sm, cfg.K, x[nz]))
    total = _exact_sum(table.values[:N])
    fourier = _times_gamma(params, total) + h_sum(params, sm, cfg.K, table, N, threads)
    V = int(np.count_nonzero(exceptional_indicator(sm, x)))
    abs_f = np.abs(vals)
    budget = float(abs_f.max(initial=0.0)) * V + tail_bound(sm, cfg.K) * block_sum(abs_f)
    return AuditReport(N, cfg.K, cfg.delta_width, G, direct, fourier, abs(direct - fourier),
                       abs(G - direct), budget, V)


@dataclass
class TheoremReport:
    N: int
    alpha: str
    beta: str
    function_id: str
    G: float
    G_by_floor: float
    main_term: float
    diff: float
    envelope: float
    ratio: float
    normalized_diff: float
    boundary_set_size: int
    boundary_bound: float
    discrepancy: float
    decomposition_residual: float | None
    passed: bool
    config: HarnessConfig
    sieve_method: str
    precision_mode: str

    def to_dict(self) -> dict:
        return {
            "meta": {"alpha": self.alpha, "beta": self.beta, "functionId": self.function_id,
                     "N": self.N, "config": asdict(self.config)},
            "results": {"G": self.G, "GByFloor": self.G_by_floor, "mainTerm": self.main_term,
                        "diff": self.diff, "envelope": self.envelope, "ratio": self.ratio,
                        "normalizedDiff": self.normalized_diff, "passed": self.passed,
                        "residuals": {"decomposition": self.decomposition_residual,
                                      "boundarySetSize": self.boundary_set_size,
                                      "boundaryBound": self.boundary_bound,
                                      "discrepancy": self.discrepancy}},
            "provenance": {"sieveMethod": self.sieve_method, "precisionMode": self.precision_mode},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def theorem_check(params: BeattyParams, f: ArithmeticFunction, N: int, cfg: HarnessConfig | None = None,
                  threads: int = 1, audit: bool | None = None) -> TheoremReport:
    gamma = float(params.gamma)
    cfg = cfg or HarnessConfig.for_N(N, gamma)
    table = _table(f, N)
    G = beatty_sum(params, table, N, threads)
    G_floor = beatty_sum(params, table, N, via="floor")
    total = _exact_sum(table.values[:N])
    main = _times_gamma(params, total)
    diff = float(G) - main
    env = theorem_envelope(N)
    x = phases_of(params.gamma, params.delta, np.arange(1, N + 1, dtype=np.int64))
    V = int(np.count_nonzero(exceptional_indicator(cfg.smoothing(gamma), x)))
    D = float(_fast_array(x).value)
    residual = None
    if audit or (audit is None and N <= 10**4):
        residual = decomposition_audit(params, table, N, cfg, threads).residual
    label = f.label if isinstance(f, ArithmeticFunction) else table.id
    desc = params.describe()
    return TheoremReport(
        N, str(desc["alpha"]), str(desc["beta"]), label, float(G), float(G_floor), main, diff, env,
        float(G) / main if main else math.nan, abs(diff) / env, V, 4 * cfg.delta_width + 2 * D, D,
        residual, abs(diff) <= env and G == G_floor, cfg, table.method, params.precision_mode)


@dataclass
class CorollaryReport:
    name: str
    N: int
    alpha: str
    beta: str
    beatty_value: float
    global_value: float
    tight_comparator: float
    closed_form: float
    rel_dev_tight: float
    rel_dev_closed: float
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"meta": {"corollary": self.name, "N": self.N, "alpha": self.alpha, "beta": self.beta},
                "results": {"beattyValue": self.beatty_value, "globalValue": self.global_value,
                            "tightComparator": self.tight_comparator, "closedForm": self.closed_form,
                            "relDevTight": self.rel_dev_tight, "relDevClosed": self.rel_dev_closed,
                            **self.extras}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _rel(a: float, b: float) -> float:
    return (a - b) / b


@lru_cache(maxsize=None)
def _landau() -> float:
    return landau_constant(10**6)[0]


def _corollary(name, params, table, N, closed, threads, extras=None) -> CorollaryReport:
    G = beatty_sum(params, table, N, threads)
    total = _exact_sum(table.values[:N])
    tight = _times_gamma(params, total)
    desc = params.describe()
    return CorollaryReport(name, N, str(desc["alpha"]), str(desc["beta"]), float(G), float(total), tight,
                           closed, _rel(float(G), tight), _rel(float(G), closed), extras or {})


def corollary_two_squares(params: BeattyParams, N: int, threads: int = 1) -> CorollaryReport:
    f = ArithmeticFunction("two_squares")
    L = math.log(N)
    closed = _landau() * N / (float(params.alpha) * math.sqrt(L))
    env = theorem_envelope(N)
    rep = _corollary("two_squares", params, f.table(N), N, closed, threads)
    rep.extras = {"landauC": _landau(), "envelope": env,
                  "envelopeDominatesMainTerm": env >= closed}
    return rep


def corollary_kfree(params: BeattyParams, k: int, N: int, threads: int = 1) -> CorollaryReport:
    f = ArithmeticFunction("k_free", k)
    zk = zeta_int(k)
    closed = float(params.gamma) * N / zk
    rep = _corollary("k_free", params, f.table(N), N, closed, threads)
    rep.extras = {"k": k, "zeta": zk, "globalCountMoebius": kfree_count_moebius(N, k),
                  "globalDensityDev": rep.global_value / N - 1 / zk}
    return rep


def corollary_four_squares(params: BeattyParams, N: int, threads: int = 1) -> CorollaryReport:
    table = ArithmeticFunction("r4").table(N)
    closed = math.pi**2 * N**2 / (2 * float(params.alpha))
    rep = _corollary("four_squares", params, table, N, closed, threads)
    n = np.arange(1, N + 1, dtype=np.float64)
    over_n = block_sum(table.values[:N] / n)
    rep.extras = {
        "globalVsHalfPi2N2": _rel(rep.global_value, math.pi**2 * N**2 / 2),
        "sumR4OverN": over_n,
        "sumR4OverNMinusPi2N": over_n - math.pi**2 * N,
        "logSquaredEnvelope": math.log(N) ** 2,
    }
    return rep
