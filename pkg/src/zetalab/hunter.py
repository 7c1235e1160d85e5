"""Constructive search for large |zeta(1+it)|.

The pipeline per start ordinate t0: find a multiplier m aligning every
m*t0*log(p)/(2 pi), p <= y, near an integer (pigeonhole by brute scan with an
explicit budget); pick a further multiplier n <= L by Fejer-kernel selection
so the real part of the prime sum beyond y is favorable; evaluate
|zeta(1 + i*m*n*t0)| with the reference evaluator and score it against
e^gamma log log t.  Budget exhaustion is data, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mc
from .numkit import EXP_GAMMA, primes_upto
from .zetaeval import zeta_reference

TWO_PI = 2.0 * math.pi
_SCAN_BLOCK = 1 << 16


@dataclass
class HuntConfig:
    """Search parameters; None fields are filled with scale-driven defaults.

    The default random-start window is [T^(1/10), T^(1/3)]: candidate
    ordinates grow like m*n*t0 and the reference evaluation costs O(t), so
    wider windows are available but expensive.  Candidates beyond
    ``t_eval_cap`` are skipped with a reason rather than evaluated.
    """

    T: float
    B: float = 5.0
    y: float | None = None
    delta: float | None = None
    delta_floor: float = 0.02
    m_max: int = 1_000_000
    L: int | None = None
    P_max: float = 1e6
    start_mode: str = "random"  # or "grid"
    start_lo: float | None = None
    start_hi: float | None = None
    t_eval_cap: float = 1e8
    target_error: float = 1e-6

    def __post_init__(self):
        if self.T <= math.e ** math.e:
            raise ValueError("T too small for iterated logarithms")
        if self.B < 5:
            raise ValueError("require B >= 5")
        l2 = math.log(math.log(self.T))
        l3 = math.log(l2)
        if self.y is None:
            self.y = max(2.0, math.log(self.T) * l2 / (4.0 * self.B * l3))
        if self.delta is None:
            self.delta = min(0.5, max(1.0 / math.floor(l2) ** 4, self.delta_floor))
        if not 0.0 < self.delta <= 0.5:
            raise ValueError("delta must lie in (0, 1/2]")
        if self.L is None:
            self.L = max(2, int(l2) ** 2)
        if self.L < 2:
            raise ValueError("require L >= 2")
        if self.y < 2:
            raise ValueError("require y >= 2")
        if self.m_max < 1:
            raise ValueError("require m_max >= 1")
        if self.start_lo is None:
            self.start_lo = self.T ** 0.1
        if self.start_hi is None:
            self.start_hi = max(self.start_lo, self.T ** (1.0 / 3.0))
        if self.start_mode not in ("random", "grid"):
            raise ValueError("start_mode must be 'random' or 'grid'")


@dataclass(frozen=True)
class ExtremeCandidate:
    """A located ordinate t = m*n*t0 with its reference value and diagnostics."""

    t: float
    t0: float
    m: int
    n: int
    zeta_abs: float
    score: float  # zeta_abs / (e^gamma log log t)
    max_frac_part: float  # max over p <= y of dist(t log p/(2 pi))


@dataclass(frozen=True)
class SkippedStart:
    index: int
    t0: float
    reason: str


@dataclass
class HuntResult:
    candidates: list
    skipped: list
    config: HuntConfig
    meta: dict = field(default_factory=dict)


def frac_distance(x) -> np.ndarray:
    """Distance to the nearest integer, elementwise."""
    f = np.mod(x, 1.0)
    return np.minimum(f, 1.0 - f)


def simultaneous_approx(t0: float, primes, delta: float, m_max: int):
    """Least m in [1, m_max] with every m*t0*log(p)/(2 pi) within delta of an
    integer, or None when the budget runs out.

    Vectorized block scan; delta = 1/2 trivially returns m = 1.
    """
    if not 0.0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    primes = np.asarray(primes, dtype=np.float64)
    if primes.size == 0:
        raise ValueError("need a nonempty prime list")
    if m_max < 1:
        raise ValueError("require m_max >= 1")
    x = np.mod(t0 * np.log(primes) / TWO_PI, 1.0)
    for lo in range(1, m_max + 1, _SCAN_BLOCK):
        ms = np.arange(lo, min(lo + _SCAN_BLOCK, m_max + 1), dtype=np.float64)
        d = frac_distance(ms[:, None] * x[None, :])
        ok = np.nonzero(np.all(d <= delta, axis=1))[0]
        if ok.size:
            return int(ms[ok[0]])
    return None


def fejer_kernel_sum(theta: float, L: int) -> float:
    """sum_{|l|<=L} (1 - |l|/L) e^(i l theta), which is real and nonnegative."""
    ls = np.arange(1, L + 1, dtype=np.float64)
    return float(1.0 + 2.0 * np.sum((1.0 - ls / L) * np.cos(ls * theta)))


def prime_reciprocal_sum(y: float, P_max: float) -> float:
    """S0 = sum of 1/p over primes y <= p <= P_max."""
    ps = primes_upto(P_max)
    ps = ps[ps >= y].astype(np.float64)
    return float(np.sum(1.0 / ps))


def fejer_select(t1: float, y: float, P_max: float, L: int, allowed=None):
    """The multiplier n in [1, L] maximizing V(n) = Re sum_{y<=p<=P_max} p^(-1-i n t1).

    Nonnegativity of the Fejer kernel guarantees max_n V(n) >= -S0/(L-1)
    over the full range; ``allowed`` optionally restricts the argmax to a
    boolean mask over n = 1..L (the guarantee then applies only to the full
    range).
    """
    if L < 2:
        raise ValueError("require L >= 2")
    ps = primes_upto(P_max)
    ps = ps[ps >= y].astype(np.float64)
    if ps.size == 0:
        raise ValueError("empty prime range [y, P_max]")
    w = 1.0 / ps
    phase = t1 * np.log(ps)
    values = np.array([np.sum(w * np.cos(n * phase)) for n in range(1, L + 1)])
    if allowed is not None:
        allowed = np.asarray(allowed, dtype=bool)
        if allowed.shape != (L,) or not allowed.any():
            raise ValueError("allowed mask must cover n = 1..L and admit some n")
        masked = np.where(allowed, values, -np.inf)
        n = int(np.argmax(masked)) + 1
    else:
        n = int(np.argmax(values)) + 1
    return n, float(values[n - 1])


def _grid_starts(config: HuntConfig, n_starts: int) -> np.ndarray:
    l2_floor = math.floor(math.log(math.log(config.T)))
    t_0 = math.floor(config.T ** (1.0 - 1.0 / config.B) / (3.0 * l2_floor ** 2))
    u_0 = math.floor(config.T ** (1.0 - 2.0 / config.B) / (7.0 * l2_floor ** 4))
    count = min(n_starts, int(u_0) + 1)
    return t_0 + np.arange(count, dtype=np.float64)


def _random_starts(config: HuntConfig, n_starts: int, master_seed: int) -> np.ndarray:
    lo, hi = math.log(config.start_lo), math.log(config.start_hi)
    out = np.empty(n_starts)
    for c, a, b in mc.iter_chunks(n_starts):
        u = mc.uniform_matrix(master_seed, mc.STREAM_HUNT, c, b - a, 1)[:, 0]
        out[a:b] = np.exp(lo + (hi - lo) * u)
    return out


def hunt(config: HuntConfig, n_starts: int, master_seed: int) -> HuntResult:
    """Run the full pipeline over ``n_starts`` start ordinates.

    Per start: m from :func:`simultaneous_approx` at tolerance delta, then n
    from :func:`fejer_select` restricted to multipliers that keep the
    combined ordinate aligned within delta (n = 1 always qualifies), then a
    reference evaluation double-checked at twice the truncation.  Candidates
    are returned sorted by score, best first; misses carry a skip reason.
    """
    aligned_primes = primes_upto(config.y)
    if aligned_primes.size == 0:
        raise ValueError("no primes below the alignment cutoff y")
    log_p = np.log(aligned_primes.astype(np.float64))

    if config.start_mode == "grid":
        starts = _grid_starts(config, n_starts)
    else:
        starts = _random_starts(config, n_starts, master_seed)

    candidates: list[ExtremeCandidate] = []
    skipped: list[SkippedStart] = []
    for i, t0 in enumerate(starts):
        t0 = float(t0)
        m = simultaneous_approx(t0, aligned_primes, config.delta, config.m_max)
        if m is None:
            skipped.append(SkippedStart(i, t0, "alignment budget exhausted"))
            continue
        base = np.mod(m * t0 * log_p / TWO_PI, 1.0)
        ns = np.arange(1, config.L + 1, dtype=np.float64)
        dists = frac_distance(ns[:, None] * base[None, :])
        allowed = np.all(dists <= config.delta, axis=1)
        allowed[0] = True  # n = 1 keeps the alignment by construction
        n, _fejer_value = fejer_select(m * t0, config.y, config.P_max, config.L, allowed=allowed)
        ell = m * n
        t = ell * t0
        if t > config.t_eval_cap:
            skipped.append(SkippedStart(i, t0, "evaluation cap exceeded"))
            continue
        value = zeta_reference(t, config.target_error)
        check = zeta_reference(t, config.target_error, n_multiplier=2)
        if abs(value - check) > 4.0 * config.target_error * max(1.0, abs(value)):
            skipped.append(SkippedStart(i, t0, "reference evaluations disagree"))
            continue
        max_frac = float(np.max(frac_distance(t * log_p / TWO_PI)))
        if max_frac > config.delta * (1.0 + 1e-9):
            skipped.append(SkippedStart(i, t0, "alignment lost after multiplier"))
            continue
        score = abs(value) / (EXP_GAMMA * math.log(math.log(t)))
        candidates.append(
            ExtremeCandidate(
                t=t,
                t0=t0,
                m=int(m),
                n=int(n),
                zeta_abs=abs(value),
                score=score,
                max_frac_part=max_frac,
            )
        )
    candidates.sort(key=lambda c: -c.score)
    meta = {
        "n_starts": n_starts,
        "master_seed": master_seed,
        "effective_delta": config.delta,
        "effective_y": config.y,
        "P_max": config.P_max,
    }
    return HuntResult(candidates=candidates, skipped=skipped, config=config, meta=meta)


def random_baseline(T: float, n: int, master_seed: int, target_error: float = 1e-6) -> list[float]:
    """Scores of plain uniform ordinates in [T, 2T]; the hunt should beat their max."""
    scores = []
    for c, a, b in mc.iter_chunks(n):
        u = mc.uniform_matrix(master_seed, mc.STREAM_BASELINE, c, b - a, 1)[:, 0]
        for t in T * (1.0 + u):
            val = abs(zeta_reference(float(t), target_error))
            scores.append(val / (EXP_GAMMA * math.log(math.log(t))))
    return scores


def stability_width(t: float) -> float:
    """The half-width 1/log^2 t over which |zeta(1+it)| moves by O(1)."""
    if t < 10:
        raise ValueError("require t >= 10")
    return 1.0 / math.log(t) ** 2


def stability_scan(t: float, target_error: float = 1e-6):
    """Five-point measurement of how much |zeta| varies across +-1/log^2 t."""
    w = stability_width(t)
    offsets = np.linspace(-w, w, 5)
    vals = [abs(zeta_reference(t + a, target_error)) for a in offsets]
    return w, float(max(vals) - min(vals))
