"""Small derivative-free search and parallel-map helpers."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

INV_PHI = (math.sqrt(5) - 1) / 2

T = TypeVar("T")
R = TypeVar("R")


def golden_max(fn: Callable[[float], float], a: float, b: float, iters: int):
    """Golden-section maximisation of ``fn`` on ``[a, b]``.

    Returns ``(x_best, f_best, (lo, hi))`` where the best point is the best
    of all evaluations and ``(lo, hi)`` is the final bracket.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f, (a, b)


def thread_count() -> int:
    env = os.environ.get("HARDY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Order-preserving map, threaded up to ``HARDY_THREADS`` workers."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
