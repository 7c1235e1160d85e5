"""Primes, Bessel I0, divisor coefficients, Mertens products and the constant C.

These are the building blocks shared by every other module: a sieved prime
table with von Mangoldt support, the modified Bessel function I0 in plain and
logarithmic form, the generalized divisor coefficients d_z(p^a), finite
Mertens products, and the growth constant

    C = int_0^2 log I0(t) dt/t^2  +  int_2^inf (log I0(t) - t) dt/t^2

that calibrates all tail predictions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

# Standard reference values, 30 digits, so fundamental constants need no
# runtime service.  gamma is the Euler-Mascheroni constant.
EULER_GAMMA = 0.577215664901532860606512090082
EXP_GAMMA = 1.78107241799019798523650410311  # exp(EULER_GAMMA)
PI = 3.14159265358979323846264338328
PRIME_ZETA_2 = 0.452247420041065498506543364832  # sum over primes of 1/p^2

PI2_OVER_6 = PI * PI / 6.0


@dataclass(frozen=True)
class PrimeTable:
    """Every prime up to ``limit`` in ascending order, with prime-power access."""

    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)  # immutable after construction

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def von_mangoldt(self, n: int) -> float:
        """Lambda(n): log p when n is a prime power p^a, zero otherwise."""
        if n < 2 or n > self.limit:
            return 0.0
        for p in self.primes:
            p = int(p)
            if p * p > n:
                break
            if n % p == 0:
                m = n
                while m % p == 0:
                    m //= p
                return math.log(p) if m == 1 else 0.0
        # no prime factor below sqrt(n): n itself is prime
        return math.log(n)

    def prime_powers(self, bound: float):
        """Yield (p, a, p**a) for every prime power p**a <= bound with a >= 1."""
        bound = min(float(bound), float(self.limit))
        for p in self.primes:
            p = int(p)
            if p > bound:
                break
            pa, a = p, 1
            while pa <= bound:
                yield p, a, pa
                pa *= p
                a += 1


@lru_cache(maxsize=128)
def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes; ``limit`` below 2 yields an empty table."""
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be a positive integer")
    if limit < 2:
        return PrimeTable(limit=limit, primes=np.array([], dtype=np.int64))
    is_comp = np.zeros(limit + 1, dtype=bool)
    is_comp[:2] = True
    for p in range(2, math.isqrt(limit) + 1):
        if not is_comp[p]:
            is_comp[p * p :: p] = True
    primes = np.nonzero(~is_comp)[0].astype(np.int64)
    return PrimeTable(limit=limit, primes=primes)


def primes_upto(y: float) -> np.ndarray:
    """Array of primes <= y; empty when y < 2."""
    if y < 2:
        return np.array([], dtype=np.int64)
    return sieve_primes(int(math.floor(y))).primes


# ---------------------------------------------------------------------------
# Modified Bessel function I0
# ---------------------------------------------------------------------------

# Above the crossover the power series is replaced by the large-argument
# expansion I0(t) ~ e^t/sqrt(2 pi t) * sum c_k/t^k; the two branches agree to
# better than 1e-11 relative at the crossover.
_I0_CROSSOVER = 50.0
_I0_SERIES_MAX = 712.0  # I0(t) overflows a double just above this


def _i0_asymptotic_coeffs(n_terms: int = 13) -> list[float]:
    c = [1.0]
    for k in range(1, n_terms):
        c.append(c[-1] * (2 * k - 1) ** 2 / (8.0 * k))
    return c


_I0_ASYMP = _i0_asymptotic_coeffs()


def bessel_I0(t: float) -> float:
    """I0(t) by its power series sum_n (t/2)^(2n)/n!^2.

    All terms are positive so no cancellation occurs; the sum is truncated
    once terms drop below 1e-17 of the total, giving relative error well
    under 1e-12.  Raises OverflowError once I0(t) exceeds the double range
    (callers should switch to :func:`log_bessel_I0`).
    """
    x = abs(float(t))
    if not math.isfinite(x):
        raise ValueError("t must be finite")
    if x > _I0_SERIES_MAX:
        raise OverflowError("I0 overflows a double here; use log_bessel_I0")
    q = x * x / 4.0
    term = 1.0
    total = 1.0
    n = 1
    while True:
        term *= q / (n * n)
        total += term
        if term < total * 1e-17:
            return total
        n += 1


def log_bessel_I0(t: float) -> float:
    """log I0(t), numerically stable for arbitrarily large t >= 0."""
    t = float(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t <= _I0_CROSSOVER:
        return math.log(bessel_I0(t))
    s = 0.0
    for c in reversed(_I0_ASYMP):
        s = s / t + c
    return t - 0.5 * math.log(2.0 * PI * t) + math.log(s)


# ---------------------------------------------------------------------------
# The constant C
# ---------------------------------------------------------------------------


def _c_head_integrand(t: float) -> float:
    # log I0(t)/t^2 tends to 1/4 as t -> 0; substitute the series there.
    if t < 1e-4:
        return 0.25 - t * t / 64.0
    return log_bessel_I0(t) / (t * t)


def _c_tail_integrand(t: float) -> float:
    return (log_bessel_I0(t) - t) / (t * t)


@lru_cache(maxsize=8)
def constant_C(tolerance: float = 1e-10) -> float:
    """The growth constant C with absolute quadrature error below ``tolerance``.

    The head integral is proper after the small-t substitution; the tail
    integrand is -(log 2 pi t)/(2 t^2) + O(1/t^3) and is integrated on an
    infinite interval by adaptive quadrature.  The value is cached per
    tolerance.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    with warnings.catch_warnings():
        # the returned error estimates are checked below; scipy's warning on
        # unreachable tolerances would just duplicate the raise
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head, e1 = integrate.quad(_c_head_integrand, 0.0, 2.0, epsabs=tolerance / 4, epsrel=0.0, limit=200)
        tail, e2 = integrate.quad(_c_tail_integrand, 2.0, np.inf, epsabs=tolerance / 4, epsrel=0.0, limit=400)
    if e1 + e2 > tolerance:
        raise RuntimeError(
            f"quadrature error estimate {e1 + e2:.3e} exceeds tolerance {tolerance:.3e}"
        )
    return head + tail


def constant_C_alt(tolerance: float = 1e-8) -> float:
    """The same constant by an independent scheme (composite midpoint doubling).

    Cross-check for :func:`constant_C`; the tail is mapped to (0, 1] via
    t = 2/w^2, leaving a bounded integrand with a mild w log w endpoint.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")

    def midpoint_doubling(f, lo, hi, tol):
        prev = None
        n = 64
        while n <= (1 << 22):
            xs = lo + (hi - lo) * (np.arange(n) + 0.5) / n
            val = (hi - lo) * math.fsum(f(x) for x in xs) / n
            if prev is not None and abs(val - prev) < tol:
                return val
            prev = val
            n *= 2
        raise RuntimeError("midpoint doubling did not converge")

    head = midpoint_doubling(_c_head_integrand, 0.0, 2.0, tolerance / 2)
    tail = midpoint_doubling(
        lambda w: (log_bessel_I0(2.0 / (w * w)) - 2.0 / (w * w)) * w, 0.0, 1.0, tolerance / 2
    )
    return head + tail


# ---------------------------------------------------------------------------
# Moment exponents and divisor coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentSpec:
    """Moment exponent z = delta*k together with an Euler-product cutoff y.

    k = 0 is accepted as the degenerate z = 0 case (the moment of order zero
    is identically 1).
    """

    k: int
    delta: int
    y: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ValueError("k must be a nonnegative integer")
        if self.delta not in (1, -1):
            raise ValueError("delta must be +1 or -1")
        if self.y < 2:
            raise ValueError("cutoff y must be >= 2")

    @property
    def z(self) -> int:
        return self.delta * self.k


def dz_prime_power(spec: MomentSpec, a: int) -> float:
    """d_z(p^a) = binomial(z+a-1, a), the coefficient of x^a in (1-x)^(-z).

    Independent of p.  Computed by the recurrence d(a) = d(a-1)(z+a-1)/a,
    which is exact for integer z and avoids factorial overflow; for
    delta = -1 it vanishes for every a > k.
    """
    if a < 0 or int(a) != a:
        raise ValueError("a must be a nonnegative integer")
    z = spec.z
    d = 1.0
    for j in range(1, a + 1):
        d *= (z + j - 1) / j
    return d


def mertens_product(k: float) -> float:
    """The finite product over primes p <= k of (1 - 1/p)^(-1)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    ps = primes_upto(k).astype(np.float64)
    return float(np.prod(ps / (ps - 1.0)))
