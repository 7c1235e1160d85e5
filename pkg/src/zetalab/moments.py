"""Local factors and moments of short Euler products.

The 2z-th moment of the short product factors over primes; each local factor
is the series sum_a d_z(p^a)^2 p^(-2a), which also equals the unit-circle
average of |1 - e(theta)/p|^(-2z).  Products over primes up to y reproduce
the restricted sum over y-smooth integers, and a closed-form main term
predicts its size.  Everything multiplicative is accumulated in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import mc
from .numkit import MomentSpec, constant_C, primes_upto
from .zetaeval import log_abs_euler_product_many

_LOG_TERM_WINDOW = 45.0  # stop once terms are e^-45 below the peak
_EXP_LIMIT = 700.0  # natural-space values beyond e^700 are refused


@dataclass(frozen=True)
class LocalFactor:
    """One prime's contribution, by series and by quadrature."""

    p: int
    spec: MomentSpec
    series_value: float
    quadrature_value: float


class LocalFactorBounds(NamedTuple):
    lower: float
    upper: float
    holds: bool


def log_local_factor_series(p: int, spec: MomentSpec) -> float:
    """log of sum_{a>=0} d_z(p^a)^2 p^(-2a), summed in log space.

    The term sequence is unimodal (finite when delta = -1), so summation
    stops once past the peak and 1e-19 below it.
    """
    z = spec.z
    k = spec.k
    if k == 0:
        return 0.0
    log_p2 = 2.0 * math.log(p)
    log_terms = [0.0]
    log_d = 0.0
    peak = 0.0
    a = 1
    while True:
        ratio = (z + a - 1) / a
        if ratio == 0.0:
            break  # delta = -1 and a = k+1: coefficients vanish from here on
        log_d += math.log(abs(ratio))
        lt = 2.0 * log_d - a * log_p2
        log_terms.append(lt)
        peak = max(peak, lt)
        # terms are unimodal; the peak sits near a = (k-1)/(p-1) when delta = +1
        if lt < peak - _LOG_TERM_WINDOW and (spec.delta == -1 or a > (k - 1) / (p - 1)):
            break
        a += 1
        if a > 200000:
            raise RuntimeError("local factor series did not converge")
    arr = np.array(log_terms)
    m = arr.max()
    return float(m + math.log(np.sum(np.exp(arr - m))))


def _local_factor_quadrature(p: int, spec: MomentSpec) -> float:
    """Adaptive quadrature of the unit-circle average of |1 - e(theta)/p|^(-2z).

    The integrand is symmetric about theta = 1/2, so only [0, 1/2] is
    integrated and doubled; the peak sits at an endpoint (0 for delta = +1,
    1/2 for delta = -1).
    """
    z = spec.z
    peak_log = -2.0 * z * math.log(1.0 - spec.delta / p)
    if peak_log > _EXP_LIMIT:
        raise OverflowError("integrand exceeds the double range; use the log series")
    inv_p2 = 1.0 / (p * p)

    def f(theta):
        r2 = 1.0 - 2.0 * math.cos(2.0 * math.pi * theta) / p + inv_p2
        return r2 ** (-z)

    val, err = integrate.quad(f, 0.0, 0.5, epsabs=0.0, epsrel=1e-11, limit=400)
    return 2.0 * val


def local_factor(p: int, spec: MomentSpec) -> LocalFactor:
    """Series and quadrature values of the local factor at p.

    The two routes are independent and should agree to 1e-8 relative; the
    caller (or the test suite) checks that invariant.
    """
    if p > spec.y:
        raise ValueError("p must not exceed the cutoff y")
    series = math.exp(log_local_factor_series(p, spec))
    quad_val = _local_factor_quadrature(p, spec)
    return LocalFactor(p=int(p), spec=spec, series_value=series, quadrature_value=quad_val)


def local_factor_bounds(p: int, spec: MomentSpec) -> LocalFactorBounds:
    """Sandwich bounds (1/50) min(1, p/k) upper <= series <= upper,
    where upper = (1 - delta/p)^(-2 k delta)."""
    if p > spec.y:
        raise ValueError("p must not exceed the cutoff y")
    upper = (1.0 - spec.delta / p) ** (-2.0 * spec.k * spec.delta)
    lower = 0.02 * min(1.0, p / spec.k) * upper if spec.k > 0 else 1.0
    series = math.exp(log_local_factor_series(p, spec))
    return LocalFactorBounds(lower=lower, upper=upper, holds=lower <= series <= upper)


def log_restricted_sum(spec: MomentSpec) -> float:
    """log of the sum over y-smooth n of d_z(n)^2/n^2 (an Euler product by
    multiplicativity)."""
    return math.fsum(log_local_factor_series(int(p), spec) for p in primes_upto(spec.y))


def restricted_sum(spec: MomentSpec) -> float:
    """The smooth-support sum itself; overflows for k large enough that the
    product leaves the double range (use :func:`log_restricted_sum` there)."""
    ls = log_restricted_sum(spec)
    if ls > _EXP_LIMIT:
        raise OverflowError("restricted sum exceeds the double range; use log_restricted_sum")
    return math.exp(ls)


def _log_prefactor(spec: MomentSpec) -> float:
    """log of prod_{p<=k} (1 - delta/p)^(-2 k delta)."""
    ps = primes_upto(spec.k).astype(np.float64)
    if ps.size == 0:
        return 0.0
    return float(-2.0 * spec.k * spec.delta * np.sum(np.log1p(-spec.delta / ps)))


def log_moment_main_term(spec: MomentSpec) -> float:
    """log of the main-term prediction prod_{p<=k}(1-delta/p)^(-2k delta)
    * exp((2k/log k) C)."""
    if spec.k < 2:
        raise ValueError("require k >= 2")
    return _log_prefactor(spec) + (2.0 * spec.k / math.log(spec.k)) * constant_C()


def moment_main_term(spec: MomentSpec) -> float:
    lv = log_moment_main_term(spec)
    if lv > _EXP_LIMIT:
        raise OverflowError("main term exceeds the double range; use log_moment_main_term")
    return math.exp(lv)


def moment_discrepancy(spec: MomentSpec) -> float:
    """Normalized gap D between the smooth sum and its main term.

    D = [log restricted_sum - log prefactor] (log k)/(2k) - C, which should
    be of size O(k/y + 1/log k).
    """
    if spec.k < 3:
        raise ValueError("require k >= 3")
    if spec.y < 2 * spec.k:
        raise ValueError("require y >= 2k")
    lhs = log_restricted_sum(spec)
    return (lhs - _log_prefactor(spec)) * math.log(spec.k) / (2.0 * spec.k) - constant_C()


def time_average_moment(
    spec: MomentSpec,
    T: float,
    n_samples: int,
    master_seed: int,
    threads: int = 1,
) -> mc.MCEstimate:
    """Monte Carlo estimate of (1/T) int_T^{2T} |zeta(1+it; y)|^(2z) dt.

    Random (not gridded) ordinates avoid aliasing against the p^(it)
    oscillations.  Deterministic in (master_seed, n_samples) regardless of
    the thread count.
    """
    if T < 1e3:
        raise ValueError("require T >= 1e3")
    if spec.k > 30:
        raise ValueError("k too large for Monte Carlo (variance overflow)")
    if spec.k == 0:
        return mc.MCEstimate(value=1.0, stderr=0.0, n=n_samples)
    two_z = 2.0 * spec.z

    def worker(chunk_index, lo, hi):
        u = mc.uniform_matrix(master_seed, mc.STREAM_TSAMPLE, chunk_index, hi - lo, 1)[:, 0]
        ts = T * (1.0 + u)
        w = np.exp(two_z * log_abs_euler_product_many(ts, spec.y))
        return float(np.sum(w)), float(np.sum(w * w))

    results = mc.map_chunks(worker, n_samples, threads)
    return mc.mc_estimate([r[0] for r in results], [r[1] for r in results], n_samples)
