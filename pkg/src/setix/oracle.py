"""Slow, obviously-correct reference implementations used by the tests."""
from __future__ import annotations

import bisect
from itertools import combinations

import numpy as np

from .errors import DuplicateElementError, ElementNotFoundError, UnknownSetError


class OracleFamily:
    """Mirror of a set family kept as sorted lists."""

    def __init__(self):
        self.sets = {}

    def add_set(self, sid):
        self.sets.setdefault(sid, [])

    def _get(self, sid):
        try:
            return self.sets[sid]
        except KeyError:
            raise UnknownSetError(sid) from None

    def insert(self, sid, e):
        s = self.sets.setdefault(sid, [])
        i = bisect.bisect_left(s, e)
        if i < len(s) and s[i] == e:
            raise DuplicateElementError(e)
        s.insert(i, e)

    def delete(self, sid, e):
        s = self._get(sid)
        i = bisect.bisect_left(s, e)
        if i == len(s) or s[i] != e:
            raise ElementNotFoundError(e)
        del s[i]

    def size(self, sid):
        return len(self._get(sid))

    def total(self):
        return sum(len(s) for s in self.sets.values())

    def intersect(self, s1, s2):
        return oracle_intersect(self._get(s1), self._get(s2))

    def disjoint(self, s1, s2):
        return not self.intersect(s1, s2)


def oracle_intersect(a, b):
    """Merge-based intersection of two sorted lists."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out.append(a[i])
            i += 1
            j += 1
    return out


def hash_intersect(a, b):
    """Second, independent intersection oracle."""
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    big = set(big)
    return sorted(x for x in set(small) if x in big)


def oracle_triangles(n, edges):
    """All triangles by checking every vertex triple; returns sorted triples."""
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if u != v:
            adj[u, v] = adj[v, u] = True
    out = set()
    for i in range(n):
        row_i = adj[i]
        for j in range(i + 1, n):
            # the third vertex ranges over every k > j
            ks = np.flatnonzero(row_i[j + 1:] & adj[j, j + 1:] & row_i[j])
            for k in ks:
                out.add((i, j, j + 1 + int(k)))
    return out


def node_iterator_triangles(n, edges):
    """Degree-ordered node iterator, O(m^1.5); independent of ``oracle_triangles``."""
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    rank = sorted(range(n), key=lambda x: (len(nbrs[x]), x))
    pos = [0] * n
    for r, x in enumerate(rank):
        pos[x] = r
    higher = [{y for y in nbrs[x] if pos[y] > pos[x]} for x in range(n)]
    out = set()
    for x in range(n):
        for y, z in combinations(sorted(higher[x]), 2):
            if z in nbrs[y]:
                out.add(tuple(sorted((x, y, z))))
    return out


def degeneracy(n, edges):
    """Degeneracy by repeatedly deleting a minimum-degree vertex (quadratic scan)."""
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    alive = set(range(n))
    best = 0
    while alive:
        x = min(alive, key=lambda y: len(nbrs[y]))
        best = max(best, len(nbrs[x]))
        for y in nbrs[x]:
            nbrs[y].discard(x)
        alive.discard(x)
        nbrs[x] = set()
    return best


def audit_tree(dump, sets):
    """Recompute every shortcut pointer of a tree dump from scratch.

    ``dump`` is ``IntersectionTree.debug_dump()``; ``sets`` maps set id to the
    internal keys of its elements.  Returns a list of human-readable problems
    (empty when the pointers are sound).
    """
    problems = []
    vertices = {v["range"]: v for v in dump["vertices"]}
    all_keys = sorted(x for s in sets.values() for x in s)
    common = {}

    def count(keys, lo, hi):
        return bisect.bisect_left(keys, hi) - bisect.bisect_left(keys, lo)

    def inter(s1, s2, lo, hi):
        key = frozenset((s1, s2))
        if key not in common:
            common[key] = sorted(sets[s1] & sets[s2])
        return count(common[key], lo, hi) > 0

    def both_large(v, s1, s2):
        return v is not None and v["classes"].get(s1) == "large" and v["classes"].get(s2) == "large"

    def children(rng):
        lo, hi = rng
        mid = (lo + hi) // 2
        return (lo, mid), (mid, hi)

    def expected_target(rng, s1, s2):
        if not inter(s1, s2, *rng):
            return None
        while True:
            v = vertices.get(rng)
            if v is None:
                problems.append(f"vertex {rng} with a nonempty intersection is not allocated")
                return rng
            if v["leaf"] or not both_large(v, s1, s2):
                return rng
            left, right = children(rng)
            li, ri = inter(s1, s2, *left), inter(s1, s2, *right)
            if li and ri:
                return rng
            rng = left if li else right

    for rng, v in vertices.items():
        lo, hi = rng
        n_v = count(all_keys, lo, hi)
        if n_v != v["total"]:
            problems.append(f"vertex {rng}: N_v {v['total']} != {n_v}")
        if v["leaf"]:
            if v["pointers"]:
                problems.append(f"leaf {rng} carries pointers")
            continue
        large = [s for s, c in v["classes"].items() if c == "large"]
        seen = set()
        for s1 in large:
            for s2 in large:
                if s1 == s2:
                    continue
                key = (s1, s2)
                seen.add(key)
                got = v["pointers"].get(key)
                if got is None:
                    problems.append(f"vertex {rng}: missing pointers for {key}")
                    continue
                for side, child in zip((0, 1), children(rng)):
                    want = expected_target(child, s1, s2)
                    if got[side] != want:
                        problems.append(f"vertex {rng} pair {key} side {side}: {got[side]} != {want}")
        for key in v["pointers"]:
            if key not in seen:
                problems.append(f"vertex {rng}: stale pointers for {key}")
    return problems
