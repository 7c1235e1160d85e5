"""Counter-based Monte Carlo streams with worker-independent determinism.

Every random quantity in the package is a pure function of a master seed, a
stream tag and a global sample index.  Samples are produced in fixed chunks
of :data:`CHUNK` indices, each chunk from its own Philox key, so any
scheduling of chunks over threads reproduces identical output.  Aggregation
always happens in chunk order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

# Chunk size is part of the determinism contract: changing it changes which
# uniforms a given sample index receives.
CHUNK = 8192

# Stream tags keep independent uses of the same master seed decorrelated.
STREAM_MODEL = 1
STREAM_TSAMPLE = 2
STREAM_HUNT = 3
STREAM_BASELINE = 4

_MASK64 = 0xFFFFFFFFFFFFFFFF
_MASK48 = 0x0000FFFFFFFFFFFF


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo mean together with its standard error."""

    value: float
    stderr: float
    n: int


def chunk_generator(master_seed: int, tag: int, chunk_index: int) -> np.random.Generator:
    """Philox generator keyed by (master_seed, stream tag, chunk index)."""
    if chunk_index < 0 or chunk_index > _MASK48:
        raise ValueError("chunk index out of range")
    key = np.array(
        [master_seed & _MASK64, ((tag & 0xFFFF) << 48) | (chunk_index & _MASK48)],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def uniform_matrix(master_seed: int, tag: int, chunk_index: int, rows: int, cols: int) -> np.ndarray:
    """Uniform [0,1) matrix for one chunk; row r belongs to sample chunk_index*CHUNK + r."""
    gen = chunk_generator(master_seed, tag, chunk_index)
    return gen.random((rows, cols))


def uniform_row(master_seed: int, tag: int, index: int, cols: int) -> np.ndarray:
    """The uniforms assigned to one global sample index (a single chunk row)."""
    if index < 0:
        raise ValueError("sample index must be nonnegative")
    chunk_index, row = divmod(index, CHUNK)
    mat = uniform_matrix(master_seed, tag, chunk_index, row + 1, cols)
    return mat[row]


def iter_chunks(n_samples: int):
    """Yield (chunk_index, lo, hi) covering sample indices [0, n_samples)."""
    n_chunks = (n_samples + CHUNK - 1) // CHUNK
    for c in range(n_chunks):
        lo = c * CHUNK
        hi = min(lo + CHUNK, n_samples)
        yield c, lo, hi


def map_chunks(worker, n_samples: int, threads: int = 1) -> list:
    """Apply ``worker(chunk_index, lo, hi)`` to every chunk, results in chunk order.

    The thread count affects wall time only; outputs are combined in index
    order so results are identical for any ``threads``.
    """
    chunks = list(iter_chunks(n_samples))
    if threads <= 1 or len(chunks) <= 1:
        return [worker(c, lo, hi) for c, lo, hi in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda args: worker(*args), chunks))


def mc_estimate(chunk_sums: list[float], chunk_sq_sums: list[float], n: int) -> MCEstimate:
    """Mean and standard error from per-chunk sums, reduced in fixed order."""
    total = math.fsum(chunk_sums)
    total_sq = math.fsum(chunk_sq_sums)
    mean = total / n
    if n > 1:
        var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
        stderr = math.sqrt(var / n)
    else:
        stderr = float("inf")
    return MCEstimate(value=mean, stderr=stderr, n=n)
