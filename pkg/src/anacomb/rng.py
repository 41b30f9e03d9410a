"""Seed derivation and batch execution shared by the Monte Carlo oracles.

Batch ``b`` of a run seeded with ``seed`` uses a PCG64 generator whose
SeedSequence entropy is the pair ``(seed mod 2^64, b)``.  Histograms are
reduced by exact integer addition, so the result is the same whether the
batches run serially or on ``THREADS`` worker threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

__all__ = ["batch_generator", "batch_sizes", "run_batches", "thread_count"]

MASK64 = (1 << 64) - 1


def batch_generator(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & MASK64, batch])))


def batch_sizes(trials: int, batch: int) -> list:
    if batch < 1:
        raise ValueError("batch size must be >= 1")
    full, rest = divmod(trials, batch)
    return [batch] * full + ([rest] if rest else [])


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("THREADS", "1")))
    except ValueError:
        return 1


def run_batches(work: Callable[[int, int], object], sizes: Sequence[int]) -> list:
    """Run ``work(b, size)`` for every batch; results come back in batch order."""
    threads = thread_count()
    if threads == 1 or len(sizes) == 1:
        return [work(b, s) for b, s in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, range(len(sizes)), sizes))
