"""Triangle listing over a low out-degree orientation.

Edges are oriented by peeling minimum-degree vertices, so every vertex keeps
at most ``degeneracy`` out-neighbours.  The out-neighbourhoods go into a
:class:`PackedFamily` and each oriented edge ``u -> v`` asks for
``out(u) & out(v)``; every hit closes exactly one triangle.
"""
from __future__ import annotations

import heapq
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .packed_sets import PackedFamily
from .word_ops import LAYOUT64

__all__ = ["Graph", "Orientation", "orient", "enumerate_triangles", "count_triangles"]


@dataclass
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``labels[i]`` is the original name of vertex ``i`` when the graph came from
    a file; ``dropped_loops`` and ``dropped_duplicates`` count input edges that
    were discarded.
    """

    n: int
    edges: list
    adjacency: list = field(repr=False)
    labels: list = None
    dropped_loops: int = 0
    dropped_duplicates: int = 0

    @classmethod
    def from_edges(cls, n, edges, labels=None):
        seen = set()
        loops = dups = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                loops += 1
                continue
            e = (u, v) if u < v else (v, u)
            if e in seen:
                dups += 1
                continue
            seen.add(e)
        clean = sorted(seen)
        adjacency = [[] for _ in range(n)]
        for u, v in clean:
            adjacency[u].append(v)
            adjacency[v].append(u)
        return cls(n, clean, adjacency, labels, loops, dups)

    @property
    def m(self):
        return len(self.edges)

    def degree(self, u):
        return len(self.adjacency[u])


@dataclass
class Orientation:
    order: list
    out_neighbors: list

    @property
    def max_out_degree(self):
        return max((len(o) for o in self.out_neighbors), default=0)


def orient(g):
    """Peel a minimum-degree vertex (lowest id on ties) until none remain.

    Each removed vertex points at its neighbours that are still present, so
    the result is acyclic and out-degrees never exceed the degeneracy.
    """
    n = g.n
    deg = [len(a) for a in g.adjacency]
    buckets = {}
    for u in range(n):
        buckets.setdefault(deg[u], []).append(u)
    for b in buckets.values():
        heapq.heapify(b)
    removed = [False] * n
    order = []
    out = [[] for _ in range(n)]
    low = 0
    while len(order) < n:
        heap = buckets.get(low)
        if not heap:
            low += 1
            continue
        u = heapq.heappop(heap)
        if removed[u] or deg[u] != low:
            continue
        removed[u] = True
        order.append(u)
        for v in g.adjacency[u]:
            if not removed[v]:
                out[u].append(v)
                deg[v] -= 1
                heapq.heappush(buckets.setdefault(deg[v], []), v)
        low = max(0, low - 1)
    return Orientation(order, out)


def _build_family(g, ori, seed, layout):
    d = ori.max_out_degree + 1
    sets = {u: nbrs for u, nbrs in enumerate(ori.out_neighbors) if nbrs}
    return PackedFamily.from_sets(d, sets, seed=seed, layout=layout)


def _walk(fam, ori, sources, ops, emit):
    out = ori.out_neighbors
    for u in sources:
        nu = out[u]
        if len(nu) < 2:
            continue
        for v in nu:
            if not out[v]:
                continue
            ops["edge_queries"] += 1
            for x in fam.intersection(u, v, ops):
                emit(u, v, x)


def _run(g, seed, layout, threads, stats, emit_factory):
    ori = orient(g)
    fam = _build_family(g, ori, seed, layout)
    stats = Counter() if stats is None else stats
    stats["edges"] += g.m
    if threads <= 1:
        ops = Counter()
        sink = emit_factory()
        _walk(fam, ori, range(g.n), ops, sink)
        stats.update(ops)
        return [sink]
    chunks = [range(i, g.n, threads) for i in range(threads)]
    counters = [Counter() for _ in chunks]
    sinks = [emit_factory() for _ in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda t: _walk(fam, ori, chunks[t], counters[t], sinks[t]), range(threads)))
    for c in counters:
        stats.update(c)
    return sinks


class _Collect(list):
    def __call__(self, u, v, x):
        a, b, c = sorted((u, v, x))
        self.append((a, b, c))


class _Tally:
    def __init__(self):
        self.count = 0

    def __call__(self, u, v, x):
        self.count += 1


def enumerate_triangles(g, seed=None, layout=LAYOUT64, threads=1, stats=None):
    """List every triangle once, as ascending vertex triples (order unspecified).

    ``stats`` (a Counter) receives the packed-word operation tally, the
    number of edge queries issued, and the edge count.
    """
    sinks = _run(g, seed, layout, threads, stats, _Collect)
    out = []
    for s in sinks:
        out.extend(s)
    return out


def count_triangles(g, seed=None, layout=LAYOUT64, threads=1, stats=None):
    sinks = _run(g, seed, layout, threads, stats, _Tally)
    return sum(s.count for s in sinks)
