# app/workers/pool.py
"""Deterministic partitioning of index ranges over worker processes.

Backends: ``inline`` (WORKERS=1, runs in this process) or ``process``
(``concurrent.futures.ProcessPoolExecutor``). Chunk results are concatenated
in index order, so the output never depends on the worker count.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable

import psutil

from app.config import settings

log = logging.getLogger(__name__)


def resolve_workers(requested: int | None = None) -> int:
    n = settings.WORKERS if requested is None else requested
    if n == 0:
        n = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return max(1, n)


def partition(total: int, size: int) -> list[tuple[int, int]]:
    """Contiguous [lo, hi) chunks of at most ``size`` indices covering [0, total)."""
    size = max(1, size)
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def run_partitioned(task: Callable[..., list], total: int, workers: int | None = None,
                    chunk: int | None = None, **kwargs) -> list:
    """Run ``task(lo, hi, **kwargs)`` over [0, total) and concatenate the results in order."""
    workers = resolve_workers(workers)
    chunk = chunk or settings.BATCH_SIZE
    if workers > 1:
        chunk = max(1, min(chunk, -(-total // workers)))
    chunks = partition(total, chunk)
    if not chunks:
        return []
    fn = partial(task, **kwargs)
    if workers == 1 or len(chunks) == 1:
        log.debug("Pool backend: inline (%d chunks)", len(chunks))
        out: list = []
        for lo, hi in chunks:
            out.extend(fn(lo, hi))
        return out
    log.info("Pool backend: process (%d workers, %d chunks)", workers, len(chunks))
    out = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(fn, [lo for lo, _ in chunks], [hi for _, hi in chunks]):
            out.extend(part)
    return out
