"""Random graphs for tests and benchmarks."""
from __future__ import annotations

import math
import random

from .triangle_enum import Graph

__all__ = ["erdos_renyi", "complete_graph", "attachment_graph"]


def erdos_renyi(n, p, seed=0):
    """G(n, p) by geometric skipping, so sparse graphs cost O(n + m)."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    edges = []
    if p > 0 and n > 1:
        total = n * (n - 1) // 2
        if p >= 1:
            picks = range(total)
        else:
            picks = _skip_sample(total, p, rng)
        # position t in the upper triangle maps back to the pair (u, v)
        u, row_end = 0, n - 1
        for t in picks:
            while t >= row_end:
                u += 1
                row_end += n - 1 - u
            v = n - (row_end - t)
            edges.append((u, v))
    return Graph.from_edges(n, edges)


def _skip_sample(total, p, rng):
    log_q = math.log1p(-p)
    t = -1
    while True:
        t += 1 + int(math.log(1.0 - rng.random()) / log_q)
        if t >= total:
            return
        yield t


def complete_graph(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def attachment_graph(n, k, seed=0):
    """Each new vertex links to ``k`` distinct earlier ones; degeneracy is at most ``k``."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    edges = []
    for u in range(1, n):
        for v in rng.sample(range(u), min(k, u)):
            edges.append((v, u))
    return Graph.from_edges(n, edges)
