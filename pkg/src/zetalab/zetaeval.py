"""Evaluating zeta on the 1-line.

Three routes are provided: a reference Euler-Maclaurin evaluation of
zeta(1+it), the short Euler product over primes up to a cutoff y, and the
truncated prime-power logarithm sum.  The reference costs O(|t|) per call and
is meant for validation subsamples and search candidates; bulk sampling goes
through the short product.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .numkit import primes_upto, sieve_primes

# B_2, B_4, ..., B_14; more correction terms than ever needed at N >= 100.
_BERNOULLI_EVEN = [
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
]

_SUM_CHUNK = 1 << 20


def _power_sum(t: float, n_max: int) -> complex:
    """sum_{n<=n_max} n^(-1-it), accumulated chunkwise with exact reduction."""
    re_parts, im_parts = [], []
    for lo in range(1, n_max + 1, _SUM_CHUNK):
        hi = min(lo + _SUM_CHUNK - 1, n_max)
        n = np.arange(lo, hi + 1, dtype=np.float64)
        vals = np.exp(-1j * (t * np.log(n))) / n
        re_parts.append(float(np.sum(vals.real)))
        im_parts.append(float(np.sum(vals.imag)))
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def zeta_reference(t: float, target_error: float = 1e-6, n_multiplier: int = 1) -> complex:
    """zeta(1+it) by Euler-Maclaurin summation.

    Sums n^(-1-it) up to N ~ max(2|t|, 100), adds the N^(-it)/(it) pole
    correction, the half-term, and Bernoulli corrections until the next
    correction falls below target_error/10 (always achievable for
    target_error in (0, 1e-3] at this N).  Negative t is evaluated by
    conjugation, so conjugate symmetry holds exactly.

    ``n_multiplier`` scales N for self-consistency checks.
    """
    t = float(t)
    if abs(t) < 1.0:
        raise ValueError("require |t| >= 1 (pole at t = 0)")
    if not (0.0 < target_error <= 1e-3):
        raise ValueError("target_error must lie in (0, 1e-3]")
    if n_multiplier < 1:
        raise ValueError("n_multiplier must be >= 1")
    if t < 0:
        return zeta_reference(-t, target_error, n_multiplier).conjugate()

    n_max = int(max(2.0 * t, 100.0)) * n_multiplier
    s = complex(1.0, t)
    total = _power_sum(t, n_max)

    # N^{1-s}/(s-1) = N^{-it}/(it), then -N^{-s}/2.
    log_n = math.log(n_max)
    n_pow_minus_s = cmath.exp(-s * log_n)
    total += cmath.exp(-1j * t * log_n) / complex(0.0, t)
    total -= 0.5 * n_pow_minus_s

    # Bernoulli corrections B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
    poly = s
    factorial = 2.0
    n_shift = n_pow_minus_s / n_max  # N^{-s-1}
    budget = target_error / 10.0
    for k, b2k in enumerate(_BERNOULLI_EVEN, start=1):
        term = (b2k / factorial) * poly * n_shift
        total += term
        if abs(term) < budget:
            break
        poly *= (s + (2 * k - 1)) * (s + 2 * k)
        factorial *= (2 * k + 1) * (2 * k + 2)
        n_shift /= n_max * n_max
    else:
        raise RuntimeError("Euler-Maclaurin corrections did not reach the target error")
    return total


def euler_product(t: float, y: float) -> complex:
    """The short Euler product over primes p <= y at s = 1 + it.

    Accumulated in log space (sum of -log(1 - p^(-1-it))) to avoid drift;
    y < 2 gives the empty product 1.
    """
    ps = primes_upto(y)
    if len(ps) == 0:
        return complex(1.0, 0.0)
    pf = ps.astype(np.float64)
    z = np.exp(-1j * (float(t) * np.log(pf))) / pf
    logs = -np.log(1.0 - z)  # |z| <= 1/2 keeps the principal branch safe
    return cmath.exp(complex(math.fsum(logs.real), math.fsum(logs.imag)))


def log_abs_euler_product_many(ts: np.ndarray, y: float) -> np.ndarray:
    """log|zeta(1+it; y)| for an array of ordinates, one vector op per prime."""
    ts = np.asarray(ts, dtype=np.float64)
    out = np.zeros_like(ts)
    for p in primes_upto(y):
        p = float(p)
        c = np.cos(ts * math.log(p))
        # |1 - p^{-1-it}|^2 = 1 - 2 cos(t log p)/p + 1/p^2
        out -= 0.5 * np.log1p((1.0 - 2.0 * c * p) / (p * p))
    return out


def log_zeta_vonmangoldt(sigma: float, t: float, y: float) -> complex:
    """The truncated sum over prime powers n = p^a <= y of Lambda(n)/(n^(sigma+it) log n).

    Each term reduces to p^(-a(sigma+it))/a.  An empty range (y < 2) gives 0.
    """
    if not (0.5 < sigma <= 2.0):
        raise ValueError("sigma must lie in (1/2, 2]")
    if y < 2:
        return complex(0.0, 0.0)
    table = sieve_primes(int(math.floor(y)))
    re_parts, im_parts = [], []
    for p, a, _pa in table.prime_powers(y):
        logp = math.log(p)
        term = cmath.exp(-a * complex(sigma, t) * logp) / a
        re_parts.append(term.real)
        im_parts.append(term.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def product_approximation_gap(t: float, y: float) -> float:
    """|zeta(1+it)/zeta(1+it; y) - 1| with the reference at target error 1e-6."""
    if abs(t) < 1.0:
        raise ValueError("require |t| >= 1")
    if y < 2:
        raise ValueError("require y >= 2")
    ref = zeta_reference(t, 1e-6)
    prod = euler_product(t, y)
    return abs(ref / prod - 1.0)
