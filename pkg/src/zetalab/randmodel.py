"""The random Euler product model.

Each prime p carries an independent multiplier X(p) = e(theta_p) uniform on
the unit circle; the model value is L(1,X; y) = prod_{p<=y} (1 - X(p)/p)^(-1).
Monte Carlo estimates of its tail distribution and moments use the shared
counter-based streams, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mc
from .numkit import MomentSpec, PRIME_ZETA_2, primes_upto
from .distribution import DistributionEstimate, _check_grid, counts_to_estimate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelSample:
    """One draw of the truncated random product."""

    y: float
    angles: dict
    value: complex
    seed_path: tuple  # (master_seed, sample index)


def l1x_from_angles(primes, thetas) -> complex:
    """prod (1 - e(theta_p)/p)^(-1) in log space; the test hook for forced angles."""
    primes = np.asarray(primes, dtype=np.float64)
    thetas = np.asarray(thetas, dtype=np.float64)
    z = np.exp(2j * math.pi * thetas) / primes
    logs = -np.log(1.0 - z)
    return complex(np.exp(complex(math.fsum(logs.real), math.fsum(logs.imag))))


def _log_abs_matrix(thetas: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """log|L| for a (rows, n_primes) angle matrix, one vector op per prime."""
    out = np.zeros(thetas.shape[0])
    for i, p in enumerate(primes):
        p = float(p)
        c = np.cos(TWO_PI * thetas[:, i])
        out -= 0.5 * np.log1p((1.0 - 2.0 * c * p) / (p * p))
    return out


def sample_L1X(y: float, master_seed: int, index: int) -> ModelSample:
    """Draw one model sample; a pure function of (y, master_seed, index).

    Angles are read from the counter-based stream in ascending-prime order;
    the angle at a given prime is a deterministic function of
    (master_seed, index, prime rank) for the chosen cutoff.
    """
    if y < 2:
        raise ValueError("require y >= 2")
    primes = primes_upto(y)
    thetas = mc.uniform_row(master_seed, mc.STREAM_MODEL, index, len(primes))
    value = l1x_from_angles(primes, thetas)
    angles = {int(p): float(th) for p, th in zip(primes, thetas)}
    return ModelSample(y=y, angles=angles, value=value, seed_path=(master_seed, index))


def tail_log_std(y: float) -> float:
    """Standard deviation of the discarded log contribution of primes above y."""
    ps = primes_upto(y).astype(np.float64)
    tail = PRIME_ZETA_2 - float(np.sum(1.0 / (ps * ps)))
    return math.sqrt(max(0.0, 0.5 * tail))


def default_model_cutoff(tol: float = 1e-3) -> float:
    """Smallest power-of-two cutoff whose truncation noise is below ``tol``."""
    y = 64.0
    while tail_log_std(y) > tol:
        y *= 2.0
        if y > 2 ** 26:
            raise RuntimeError("cutoff search exceeded the sieve budget")
    return y


def model_distribution(
    tau_grid,
    y: float,
    n_samples: int,
    master_seed: int,
    threads: int = 1,
) -> DistributionEstimate:
    """Monte Carlo tails of |L(1,X; y)|.

    The upper tail counts |L| >= e^gamma tau and the lower tail counts
    |L| <= pi^2/(6 e^gamma tau); both thresholds are inclusive here, matching
    the probabilistic definitions (ties have probability zero).  Counts are
    exact integers reduced in chunk order.
    """
    if y < 2:
        raise ValueError("require y >= 2")
    if n_samples < 1:
        raise ValueError("need at least one sample")
    grid = _check_grid(tau_grid)
    from .distribution import tail_thresholds

    upper, lower = tail_thresholds(grid)
    primes = primes_upto(y)

    def worker(chunk_index, lo, hi):
        thetas = mc.uniform_matrix(master_seed, mc.STREAM_MODEL, chunk_index, hi - lo, len(primes))
        vals = np.exp(_log_abs_matrix(thetas, primes))
        phi_c = (vals[:, None] >= upper[None, :]).sum(axis=0)
        psi_c = (vals[:, None] <= lower[None, :]).sum(axis=0)
        return phi_c.astype(np.int64), psi_c.astype(np.int64)

    results = mc.map_chunks(worker, n_samples, threads)
    phi_counts = np.sum([r[0] for r in results], axis=0)
    psi_counts = np.sum([r[1] for r in results], axis=0)
    return counts_to_estimate(
        grid,
        phi_counts,
        psi_counts,
        n_samples,
        "model",
        meta={"y": y, "master_seed": master_seed, "tail_log_std": tail_log_std(y)},
    )


def model_moment_mc(
    spec: MomentSpec,
    n_samples: int,
    master_seed: int,
    threads: int = 1,
) -> mc.MCEstimate:
    """Monte Carlo mean of |L(1,X; y)|^(2z) with its standard error.

    k above 30 is rejected: the integrand's variance then outruns any
    realistic sample size.
    """
    if spec.k > 30:
        raise ValueError("k too large for Monte Carlo (variance overflow)")
    if n_samples < 1000:
        raise ValueError("need n_samples >= 1000")
    if spec.k == 0:
        return mc.MCEstimate(value=1.0, stderr=0.0, n=n_samples)
    primes = primes_upto(spec.y)
    two_z = 2.0 * spec.z

    def worker(chunk_index, lo, hi):
        thetas = mc.uniform_matrix(master_seed, mc.STREAM_MODEL, chunk_index, hi - lo, len(primes))
        w = np.exp(two_z * _log_abs_matrix(thetas, primes))
        return float(np.sum(w)), float(np.sum(w * w))

    results = mc.map_chunks(worker, n_samples, threads)
    return mc.mc_estimate([r[0] for r in results], [r[1] for r in results], n_samples)
