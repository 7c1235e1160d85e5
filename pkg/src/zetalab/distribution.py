"""Predicted and empirical tail functions of |zeta(1+it)| on the 1-line.

The upper tail phi(tau) counts ordinates with |zeta(1+it)| > e^gamma tau, the
lower tail psi(tau) counts |zeta(1+it)| < pi^2/(6 e^gamma tau).  The predictor
for both is exp(-2 e^(tau-C-1)/tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mc
from .numkit import EXP_GAMMA, PI2_OVER_6, constant_C
from .zetaeval import log_abs_euler_product_many, zeta_reference

PROVENANCES = ("model", "zeta_euler_product", "zeta_reference", "characters")


@dataclass
class DistributionEstimate:
    """Tail probabilities on a tau grid, with binomial standard errors."""

    tau_grid: np.ndarray
    phi: np.ndarray
    phi_stderr: np.ndarray
    psi: np.ndarray
    psi_stderr: np.ndarray
    n_samples: int
    provenance: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if len(self.tau_grid) == 0:
            raise ValueError("empty tau grid")

    def csv_rows(self):
        """Rows in the shared schema tau, phi, phi_stderr, psi, psi_stderr, n, provenance."""
        for i, tau in enumerate(self.tau_grid):
            yield (
                float(tau),
                float(self.phi[i]),
                float(self.phi_stderr[i]),
                float(self.psi[i]),
                float(self.psi_stderr[i]),
                self.n_samples,
                self.provenance,
            )


CSV_HEADER = ("tau", "phi", "phi_stderr", "psi", "psi_stderr", "n", "provenance")


def _check_grid(tau_grid) -> np.ndarray:
    grid = np.asarray(tau_grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("empty tau grid")
    if np.any(np.diff(grid) < 0):
        raise ValueError("tau grid must be ascending")
    return grid


def tail_thresholds(tau_grid: np.ndarray):
    """Absolute thresholds for the upper and lower tails at each tau."""
    upper = EXP_GAMMA * tau_grid
    with np.errstate(divide="ignore"):
        lower = np.where(tau_grid > 0, PI2_OVER_6 / (EXP_GAMMA * tau_grid), np.inf)
    return upper, lower


def counts_to_estimate(tau_grid, phi_counts, psi_counts, n, provenance, meta=None) -> DistributionEstimate:
    phi = phi_counts / n
    psi = psi_counts / n
    return DistributionEstimate(
        tau_grid=tau_grid,
        phi=phi,
        phi_stderr=np.sqrt(phi * (1.0 - phi) / n),
        psi=psi,
        psi_stderr=np.sqrt(psi * (1.0 - psi) / n),
        n_samples=n,
        provenance=provenance,
        meta=meta or {},
    )


def predict_phi(tau: float) -> float:
    """The predicted tail exp(-2 e^(tau-C-1)/tau) with the error factor dropped."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    c = constant_C()
    return math.exp(-2.0 * math.exp(tau - c - 1.0) / tau)


def default_product_cutoff(T: float) -> float:
    """The cheapest admissible short-product cutoff, e^2 log T."""
    return math.e ** 2 * math.log(T)


def empirical_phi(
    T: float,
    tau_grid,
    y: float,
    n_samples: int,
    master_seed: int,
    threads: int = 1,
) -> DistributionEstimate:
    """Tail fractions of |zeta(1+it; y)| over uniform random t in [T, 2T].

    Exceedance is strict (>) for the upper tail and strict (<) for the lower
    tail.  Counts are exact integers accumulated in chunk order, so the
    result is a deterministic function of (master_seed, n_samples, y)
    independent of the thread count.
    """
    if T < 1e4:
        raise ValueError("require T >= 1e4")
    if y < 2:
        raise ValueError("require y >= 2")
    grid = _check_grid(tau_grid)
    upper, lower = tail_thresholds(grid)

    def worker(chunk_index, lo, hi):
        u = mc.uniform_matrix(master_seed, mc.STREAM_TSAMPLE, chunk_index, hi - lo, 1)[:, 0]
        ts = T * (1.0 + u)
        vals = np.exp(log_abs_euler_product_many(ts, y))
        phi_c = (vals[:, None] > upper[None, :]).sum(axis=0)
        psi_c = (vals[:, None] < lower[None, :]).sum(axis=0)
        return phi_c.astype(np.int64), psi_c.astype(np.int64)

    results = mc.map_chunks(worker, n_samples, threads)
    phi_counts = np.sum([r[0] for r in results], axis=0)
    psi_counts = np.sum([r[1] for r in results], axis=0)
    return counts_to_estimate(
        grid,
        phi_counts,
        psi_counts,
        n_samples,
        "zeta_euler_product",
        meta={"T": T, "y": y, "master_seed": master_seed},
    )


def reference_agreement(
    T: float,
    y: float,
    tau: float,
    n_check: int,
    master_seed: int,
    target_error: float = 1e-6,
) -> float:
    """Fraction of validation samples where the short product and the
    reference evaluator classify the threshold e^gamma tau identically.

    Uses the first ``n_check`` ordinates of the same stream as
    :func:`empirical_phi`, so it validates exactly the sampled population.
    """
    threshold = EXP_GAMMA * tau
    agree = 0
    for c, lo, hi in mc.iter_chunks(n_check):
        u = mc.uniform_matrix(master_seed, mc.STREAM_TSAMPLE, c, hi - lo, 1)[:, 0]
        ts = T * (1.0 + u)
        short = np.exp(log_abs_euler_product_many(ts, y))
        for i, t in enumerate(ts):
            ref = abs(zeta_reference(float(t), target_error))
            if (ref > threshold) == (short[i] > threshold):
                agree += 1
    return agree / n_check


def levinson_baseline(T: float) -> float:
    """The classical lower-bound size e^gamma log log T."""
    if T <= math.e ** math.e:
        raise ValueError("require T > e^e")
    return EXP_GAMMA * math.log(math.log(T))


def predicted_max(T: float, variant: str = "zeta") -> float:
    """Conjectured extreme size over [T, 2T].

    For ``variant="zeta"`` this is e^gamma (log2 T + log3 T + C + 1 - log 2);
    for ``variant="reciprocal"`` the same bracket scaled by 6 e^gamma/pi^2,
    the conjectured maximum of 1/|zeta(1+it)|.
    """
    if T <= math.e ** math.e:
        raise ValueError("require T > e^e so the iterated logarithm is defined")
    l2 = math.log(math.log(T))
    l3 = math.log(l2)
    bracket = l2 + l3 + constant_C() + 1.0 - math.log(2.0)
    if variant == "zeta":
        return EXP_GAMMA * bracket
    if variant == "reciprocal":
        return (6.0 * EXP_GAMMA / (math.pi ** 2)) * bracket
    raise ValueError("variant must be 'zeta' or 'reciprocal'")
