"""Low-level numerical helpers: quadrature rules, deterministic reductions
and a fixed-partition thread pool.

Every reduction in the package goes through :func:`pairwise_sum` or through
:func:`chunked_map` followed by :func:`pairwise_sum`.  Chunk boundaries
depend only on the problem size, never on the worker count, so results are
bit-identical for any ``threads`` setting.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

__all__ = [
    "get_threads",
    "set_threads",
    "gl_nodes",
    "pairwise_sum",
    "chunked_map",
    "chebyshev_lobatto",
]

_default_threads = max(1, int(os.environ.get("SYMRIDGE_THREADS", "1")))


def set_threads(n: int) -> None:
    """Set the worker count used by :func:`chunked_map` (process-wide)."""
    global _default_threads
    if int(n) < 1:
        raise ValueError("thread count must be >= 1")
    _default_threads = int(n)


def get_threads() -> int:
    return _default_threads


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gl_nodes(n: int, lo: float, hi: float):
    """Gauss-Legendre nodes and weights mapped to ``[lo, hi]``."""
    x, w = _leggauss(int(n))
    half = 0.5 * (hi - lo)
    return half * x + 0.5 * (hi + lo), half * w


def chebyshev_lobatto(n: int, lo: float, hi: float):
    """Chebyshev points of the second kind on ``[lo, hi]`` (ascending)."""
    k = np.arange(n)
    x = -np.cos(np.pi * k / (n - 1))
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo)


def pairwise_sum(x, axis: int = 0):
    """Sum along ``axis`` by explicit recursive halving.

    The association order depends only on the length of the axis, which
    makes the result independent of memory layout and BLAS threading.
    """
    x = np.moveaxis(np.asarray(x), axis, 0)
    if x.shape[0] == 0:
        return np.zeros(x.shape[1:], dtype=x.dtype)
    while x.shape[0] > 1:
        n = x.shape[0]
        half = n // 2
        head = x[: 2 * half : 2] + x[1 : 2 * half : 2]
        if n % 2:
            head = np.concatenate([head, x[-1:]], axis=0)
        x = head
    return x[0]


def chunked_map(func, n_items: int, chunk: int, threads: int | None = None):
    """Apply ``func(start, stop)`` over fixed chunks of ``range(n_items)``.

    Returns the list of results in chunk order.  The partition is fixed by
    ``chunk``; ``threads`` only controls how many chunks run concurrently.
    """
    chunk = max(1, int(chunk))
    bounds = [(s, min(s + chunk, n_items)) for s in range(0, n_items, chunk)]
    threads = get_threads() if threads is None else int(threads)
    if threads <= 1 or len(bounds) <= 1:
        return [func(s, e) for s, e in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda se: func(*se), bounds))
