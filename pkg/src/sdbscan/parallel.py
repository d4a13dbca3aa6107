"""Deterministic thread-parallel chunking.

Work splits into fixed-size chunks (constant, never derived from the thread
count) and results merge in chunk order, so output is byte-identical for any
--threads value.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

CHUNK = 256


def default_threads() -> int:
    return os.cpu_count() or 1


def chunk_ranges(n: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(s, min(s + chunk, n)) for s in range(0, n, chunk)]


def run_chunked(fn, n: int, threads: int, chunk: int = CHUNK) -> list:
    """fn(start, stop) per chunk; results returned in chunk order."""
    ranges = chunk_ranges(n, chunk)
    if threads <= 1 or len(ranges) <= 1:
        return [fn(s, e) for s, e in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, s, e) for s, e in ranges]
        return [f.result() for f in futures]
