"""Dirichlet characters modulo a prime and the values L(1, chi).

Characters are realized through a discrete-logarithm table: with g a
primitive root mod q, character j maps n to e(j*ind(n)/(q-1)).  Exact values
of L(1, chi) come from two independent routes (periodic partial sums with an
analytic tail, and the finite parity-split closed form via Gauss sums); the
closed form is also evaluated for the whole character group at once by an
FFT over the index table.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .numkit import EXP_GAMMA, MomentSpec, primes_upto
from .distribution import DistributionEstimate, _check_grid, counts_to_estimate, tail_thresholds

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CharacterTable:
    """All characters mod the prime q through a primitive root g.

    ``ind[n]`` is the discrete log of n base g for 1 <= n <= q-1 (ind[0] is a
    -1 sentinel); character j acts by chi_j(n) = e(j*ind[n]/(q-1)) and
    chi_j(n) = 0 when q divides n.
    """

    q: int
    g: int
    ind: np.ndarray
    pows: np.ndarray  # pows[l] = g^l mod q, length q-1

    def __post_init__(self):
        self.ind.setflags(write=False)
        self.pows.setflags(write=False)

    @property
    def order(self) -> int:
        return self.q - 1

    def chi(self, j: int, n: int) -> complex:
        n %= self.q
        if n == 0:
            return 0j
        return cmath.exp(2j * math.pi * (j * int(self.ind[n]) % self.order) / self.order)

    def chi_on_residues(self, j: int) -> np.ndarray:
        """chi_j(n) for n = 1..q-1 as a complex vector."""
        return np.exp(2j * math.pi * ((j * self.ind[1:]) % self.order) / self.order)

    def parity(self, j: int) -> int:
        """+1 for even characters (chi(-1) = 1), -1 for odd."""
        return 1 if j % 2 == 0 else -1


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in primes_upto(math.isqrt(q)):
        if q % int(p) == 0:
            return q == int(p)
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    for p in primes_upto(math.isqrt(n)):
        p = int(p)
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    if n > 1:
        out.append(n)
    return out


def build_table(q: int) -> CharacterTable:
    """Build the index table mod a prime q, verifying the primitive root's order."""
    if not 3 <= q <= 10 ** 6:
        raise ValueError("require 3 <= q <= 1e6")
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    factors = _prime_factors(q - 1)
    g = None
    for cand in range(2, q):
        if all(pow(cand, (q - 1) // r, q) != 1 for r in factors):
            g = cand
            break
    if g is None:
        raise RuntimeError("no primitive root found (impossible for prime q)")
    pows = np.empty(q - 1, dtype=np.int64)
    ind = np.full(q, -1, dtype=np.int64)
    acc = 1
    for l in range(q - 1):
        pows[l] = acc
        ind[acc] = l
        acc = (acc * g) % q
    if acc != 1:
        raise RuntimeError("order check failed: g is not primitive")
    return CharacterTable(q=q, g=g, ind=ind, pows=pows)


# ---------------------------------------------------------------------------
# L(1, chi)
# ---------------------------------------------------------------------------


def L1_chi_euler(table: CharacterTable, j: int, y: float) -> complex:
    """The finite Euler product over p <= y, p != q, accumulated in log space."""
    if j % table.order == 0:
        raise ValueError("principal character rejected")
    ps = [int(p) for p in primes_upto(y) if int(p) != table.q]
    if not ps:
        return complex(1.0, 0.0)
    total = complex(0.0, 0.0)
    for p in ps:
        total -= cmath.log(1.0 - table.chi(j, p) / p)
    return cmath.exp(total)


def closed_form_all(table: CharacterTable) -> np.ndarray:
    """L(1, chi_j) for every j in one pass, by FFT over the index table.

    Even characters pair with log(2 sin(pi a/q)) weights and odd characters
    with a/q weights, both normalized by the Gauss sum of the conjugate
    character.  Entry j = 0 (principal) is NaN.
    """
    q = table.q
    a = table.pows.astype(np.float64)  # residues ordered by discrete log
    gauss_conj = np.fft.fft(np.exp(2j * math.pi * a / q))
    s_log = np.fft.fft(np.log(2.0 * np.sin(math.pi * a / q)))
    s_lin = np.fft.fft(a / q)
    out = np.empty(q - 1, dtype=np.complex128)
    js = np.arange(q - 1)
    even = js % 2 == 0
    out[even] = -s_log[even] / gauss_conj[even]
    out[~even] = -(1j * math.pi) * s_lin[~even] / gauss_conj[~even]
    out[0] = complex(float("nan"), float("nan"))
    return out


def _closed_form_single(table: CharacterTable, j: int) -> complex:
    q = table.q
    chi_bar = np.conj(table.chi_on_residues(j))
    a = np.arange(1, q, dtype=np.float64)
    gauss_conj = np.sum(chi_bar * np.exp(2j * math.pi * a / q))
    if table.parity(j) == 1:
        return complex(-np.sum(chi_bar * np.log(2.0 * np.sin(math.pi * a / q))) / gauss_conj)
    return complex(-(1j * math.pi / q) * np.sum(chi_bar * a) / gauss_conj)


_PERIODS = 256
_TAIL_TERMS_MAX = 16


def _partial_sum_value(table: CharacterTable, j: int, target_error: float) -> complex:
    """Partial sums of chi(n)/n over complete periods plus the analytic tail.

    After M complete periods the tail sum_{m>=M} sum_r chi(r)/(mq+r) expands
    into moment sums S_j = sum_r chi(r) r^j against Hurwitz zeta values; the
    remainder drops like M^-(J+1), and the crude two-periods Abel bound q/N
    is kept as a fallback guard.
    """
    q = table.q
    chi_vals = np.empty(q, dtype=np.complex128)
    chi_vals[0] = 0.0
    chi_vals[1:] = table.chi_on_residues(j)
    n = np.arange(1, _PERIODS * q, dtype=np.float64)
    direct = np.sum(chi_vals[np.arange(1, _PERIODS * q) % q] / n)

    r = np.arange(1, q, dtype=np.float64)
    chi_r = chi_vals[1:]
    tail = complex(0.0, 0.0)
    r_pow = np.ones_like(r)
    bound = float("inf")
    for jj in range(1, _TAIL_TERMS_MAX + 1):
        r_pow = r_pow * r
        s_j = np.sum(chi_r * r_pow)
        term = ((-1) ** jj) * s_j * float(hurwitz_zeta(jj + 1, _PERIODS)) / q ** (jj + 1)
        tail += term
        # crude remainder bound: |S_j| <= q^(j+1)/(j+1)
        bound = float(hurwitz_zeta(jj + 2, _PERIODS)) / (jj + 2)
        if bound < target_error / 10.0:
            break
    if bound > target_error:
        raise RuntimeError("tail budget insufficient for the requested target error")
    return complex(direct) + tail


def L1_chi_exact(table: CharacterTable, j: int, target_error: float = 1e-10) -> complex:
    """L(1, chi_j) by periodic partial sums, cross-checked against the closed form.

    The two independent routes must agree to 10*target_error; a mismatch is
    an error (it would indicate a character-convention bug, not noise).
    """
    if j % table.order == 0:
        raise ValueError("principal character rejected")
    if target_error <= 0:
        raise ValueError("target_error must be positive")
    partial = _partial_sum_value(table, j, target_error)
    closed = _closed_form_single(table, j)
    if abs(partial - closed) > 10.0 * target_error:
        raise RuntimeError(
            f"dual evaluations disagree by {abs(partial - closed):.3e} for j={j} mod {table.q}"
        )
    return partial


# ---------------------------------------------------------------------------
# Distribution, scan, dyadic averages
# ---------------------------------------------------------------------------


def _log_abs_euler_all(table: CharacterTable, y: float, include_principal: bool) -> np.ndarray:
    """log|L(1, chi_j; y)| for every j at once, one vector op per prime."""
    q = table.q
    js = np.arange(q - 1)
    out = np.zeros(q - 1)
    for p in primes_upto(y):
        p = int(p)
        if p == q:
            continue
        ang = TWO_PI * ((js * int(table.ind[p % q])) % (q - 1)) / (q - 1)
        c = np.cos(ang)
        out -= 0.5 * np.log1p((1.0 - 2.0 * c * p) / (p * p))
    if not include_principal:
        out[0] = np.nan
    return out


def char_distribution(table: CharacterTable, tau_grid, method: str = "exact", y: float | None = None) -> DistributionEstimate:
    """Exact-count tail proportions of |L(1, chi)| over all nonprincipal characters.

    No sampling: all q-2 nonprincipal characters are enumerated, either via
    the closed form ("exact") or the finite Euler product ("euler", cutoff y).
    """
    if table.q < 100:
        raise ValueError("require q >= 100 for meaningful proportions")
    grid = _check_grid(tau_grid)
    if method == "exact":
        vals = np.abs(closed_form_all(table)[1:])
    elif method == "euler":
        if y is None or y < 2:
            raise ValueError("euler method needs a cutoff y >= 2")
        vals = np.exp(_log_abs_euler_all(table, y, include_principal=False)[1:])
    else:
        raise ValueError("method must be 'exact' or 'euler'")
    n = table.q - 2
    upper, lower = tail_thresholds(grid)
    phi_counts = (vals[:, None] > upper[None, :]).sum(axis=0).astype(np.int64)
    psi_counts = (vals[:, None] < lower[None, :]).sum(axis=0).astype(np.int64)
    return counts_to_estimate(
        grid,
        phi_counts,
        psi_counts,
        n,
        "characters",
        meta={"q": table.q, "method": method, "y": y},
    )


class CharHuntResult(NamedTuple):
    count: int
    threshold: float
    top: list  # (j, |L|) pairs, largest first
    q_power_bound: float  # q^(1 - 1/A), the comparison size
    ratio: float


def char_hunt(table: CharacterTable, A: float = 10.0) -> CharHuntResult:
    """Exhaustive scan for characters with |L(1, chi)| at the extreme threshold.

    threshold = e^gamma (log2 q + log3 q - log4 q - log A).  The count is
    compared against q^(1-1/A) diagnostically; nothing is asserted since the
    comparison is asymptotic.
    """
    if A < 10:
        raise ValueError("require A >= 10")
    q = table.q
    l2 = math.log(math.log(q))
    if l2 <= 1.0:
        # log4 q = log(log(l2)) needs l2 > 1, first reached at the prime 17
        raise ValueError("log4 q undefined for this q; the minimal admissible q is 17")
    l3 = math.log(l2)
    l4 = math.log(l3)
    threshold = EXP_GAMMA * (l2 + l3 - l4 - math.log(A))
    vals = np.abs(closed_form_all(table)[1:])
    count = int(np.sum(vals >= threshold))
    order = np.argsort(-vals)[:10]
    top = [(int(jj) + 1, float(vals[jj])) for jj in order]
    q_bound = q ** (1.0 - 1.0 / A)
    return CharHuntResult(count=count, threshold=threshold, top=top, q_power_bound=q_bound, ratio=count / q_bound)


def dyadic_moment(Q: float, spec: MomentSpec) -> float:
    """The dyadic character-average moment

        (1/#{q}) sum_{Q<=q<=2Q prime} (1/phi(q)) sum_{chi mod q} |L(1,chi;y)|^(2z),

    by direct evaluation over every character of every modulus (the
    principal character contributes its y-smooth Euler product with the
    p = q factor removed).
    """
    if Q > 1e4:
        raise ValueError("require Q <= 1e4 (desk-scale exhaustive average)")
    if spec.k > 5:
        raise ValueError("require k <= 5")
    if spec.k == 0:
        return 1.0
    qs = [int(p) for p in primes_upto(2 * Q) if p >= Q]
    if not qs:
        raise ValueError("no primes in [Q, 2Q]")
    two_z = 2.0 * spec.z
    per_q = []
    for q in qs:
        table = build_table(q)
        logabs = _log_abs_euler_all(table, spec.y, include_principal=True)
        per_q.append(float(np.mean(np.exp(two_z * logabs))))
    return math.fsum(per_q) / len(per_q)
