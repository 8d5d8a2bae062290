"""Fully dynamic set intersection with reporting and witness queries.

Elements are renamed to keys in ``[0, 2N')`` (smallest unused integer, then a
keyed Feistel permutation to spread them out).  A binary tree over the key
range keeps, at every vertex ``v``, an :class:`EmptinessStructure` over the
restrictions ``S & range(v)`` with a budget proportional to the number of
keys stored below ``v``.  Those structures are built with ``split`` at the
vertex midpoint, so for two sets that are both large at ``v`` the tables say
how many common elements fall in each child.

For every such pair the vertex also stores a left and right shortcut: the
first vertex down that side where the common elements branch into both
children, or where one of the two sets stops being large (leaves count as
stopping points).  Queries follow shortcuts while both sets are large and
scan the smaller restriction once they are not.

Updates walk the leaf-to-root path once and repair only the shortcuts of
pairs whose state changed on that path.
"""
from __future__ import annotations

import math
from collections import Counter

from .emptiness import MIN_ANCHOR, EmptinessStructure, nearest_power_of_two
from .errors import DuplicateElementError, ElementNotFoundError, UnknownSetError
from .hashing import make_rng

__all__ = ["FeistelPermutation", "IntersectionTree"]

_MASK64 = (1 << 64) - 1


def _mix(x, key):
    z = (x * 0x9E3779B97F4A7C15 + key) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class FeistelPermutation:
    """Keyed bijection on ``range(size)``; cycle-walks when size is not 4**k."""

    def __init__(self, size, rng, rounds=4):
        if size < 1:
            raise ValueError("size must be positive")
        self.size = size
        bits = max(2, (size - 1).bit_length())
        bits += bits & 1
        self._half = bits // 2
        self._mask = (1 << self._half) - 1
        self._keys = [rng.getrandbits(64) for _ in range(rounds)]

    def _forward(self, x):
        h, m = self._half, self._mask
        left, right = x >> h, x & m
        for k in self._keys:
            left, right = right, left ^ (_mix(right, k) & m)
        return (left << h) | right

    def _backward(self, x):
        h, m = self._half, self._mask
        left, right = x >> h, x & m
        for k in reversed(self._keys):
            left, right = right ^ (_mix(left, k) & m), left
        return (left << h) | right

    def __call__(self, x):
        if not 0 <= x < self.size:
            raise ValueError(f"{x} outside 0..{self.size - 1}")
        x = self._forward(x)
        while x >= self.size:
            x = self._forward(x)
        return x

    def inverse(self, y):
        if not 0 <= y < self.size:
            raise ValueError(f"{y} outside 0..{self.size - 1}")
        y = self._backward(y)
        while y >= self.size:
            y = self._backward(y)
        return y


class _Vertex:
    __slots__ = ("lo", "hi", "depth", "leaf", "es", "children", "ptr")

    def __init__(self, lo, hi, depth, es):
        self.lo = lo
        self.hi = hi
        self.depth = depth
        self.leaf = hi - lo <= 2
        self.es = es
        self.children = [None, None]
        # ptr[a][b] is the [left, right] shortcut pair, shared with ptr[b][a]
        self.ptr = {}

    @property
    def mid(self):
        return (self.lo + self.hi) // 2


class IntersectionTree:
    """Dynamic family supporting ``report`` and ``witness`` intersection queries.

    ``M`` is the total space budget in words; the per-vertex budgets use
    ``M / log2(N')`` so that the whole tree stays within ``O(M)``.
    """

    def __init__(self, M, seed=None, min_anchor=MIN_ANCHOR):
        if M < 1:
            raise ValueError("space budget M must be at least 1")
        self.M = M
        self.min_anchor = min_anchor
        self._rng = make_rng(seed)
        self.anchor = min_anchor
        self.total = 0
        self._sets = {}
        self._refs = Counter()
        self._code = {}
        self._next_code = 0
        self._elem_of_key = {}
        self.root = None
        self.stats = Counter()
        self.last_query = {}
        self._reset_geometry()

    # -- geometry -----------------------------------------------------------

    def _reset_geometry(self):
        self.universe = 2 * self.anchor
        self.height = self.anchor.bit_length()
        self.inner_budget = max(1.0, self.M / math.log2(self.anchor))
        self.density = self.inner_budget / self.anchor
        self._perm = FeistelPermutation(self.universe, self._rng)

    def _new_es(self, lo, hi, sets=None):
        split = (lo + hi) // 2
        if sets is None:
            return EmptinessStructure(density=self.density, split=split, min_anchor=self.min_anchor)
        return EmptinessStructure.from_sets(
            sets, density=self.density, split=split, min_anchor=self.min_anchor
        )

    def _key_of(self, e):
        return self._perm(self._code[e])

    # -- registry -----------------------------------------------------------

    def add_set(self, sid):
        self._sets.setdefault(sid, set())

    def _get(self, sid):
        try:
            return self._sets[sid]
        except KeyError:
            raise UnknownSetError(sid) from None

    def members(self, sid):
        return self._get(sid)

    def size(self, sid):
        return len(self._get(sid))

    # -- updates ------------------------------------------------------------

    def insert(self, sid, e):
        s = self._sets.get(sid)
        if s is None:
            s = self._sets[sid] = set()
        if e in s:
            raise DuplicateElementError(e)
        if e not in self._code:
            if self._next_code >= self.universe:
                self.rebuild(reason="keys")
            self._code[e] = self._next_code
            self._next_code += 1
            self._elem_of_key[self._key_of(e)] = e
        key = self._key_of(e)
        s.add(e)
        self._refs[e] += 1
        self.total += 1
        self.stats["updates"] += 1

        if self.root is None:
            self.root = _Vertex(0, self.universe, 0, self._new_es(0, self.universe))
        path = [self.root]
        v = self.root
        while not v.leaf:
            side = 0 if key < v.mid else 1
            child = v.children[side]
            if child is None:
                lo, hi = (v.lo, v.mid) if side == 0 else (v.mid, v.hi)
                child = v.children[side] = _Vertex(lo, hi, v.depth + 1, self._new_es(lo, hi))
            path.append(child)
            v = child
        dirty = {sid}
        for v in reversed(path):
            rebuilds = v.es.stats["rebuilds"]
            before = v.es.stats["probes"]
            v.es.insert(sid, key)
            if v.es.stats["rebuilds"] != rebuilds:
                dirty |= v.es.large_changed
            self.stats["probes"] += v.es.stats["probes"] - before
            self._repair(v, dirty)
        if self.total > 2 * self.anchor:
            self.rebuild(reason="grow")

    def delete(self, sid, e):
        s = self._get(sid)
        if e not in s:
            raise ElementNotFoundError(e)
        key = self._key_of(e)
        s.remove(e)
        self._refs[e] -= 1
        if not self._refs[e]:
            del self._refs[e]
        self.total -= 1
        self.stats["updates"] += 1

        path = [self.root]
        v = self.root
        while not v.leaf:
            v = v.children[0 if key < v.mid else 1]
            path.append(v)
        dirty = {sid}
        for i in range(len(path) - 1, -1, -1):
            v = path[i]
            rebuilds = v.es.stats["rebuilds"]
            before = v.es.stats["probes"]
            v.es.delete(sid, key)
            if v.es.stats["rebuilds"] != rebuilds:
                dirty |= v.es.large_changed
            self.stats["probes"] += v.es.stats["probes"] - before
            if v.es.total == 0:
                if i == 0:
                    self.root = None
                else:
                    parent = path[i - 1]
                    parent.children[parent.children.index(v)] = None
                continue
            self._repair(v, dirty)
        if self.total < self.anchor / 2 and self.anchor > self.min_anchor:
            self.rebuild(reason="shrink")

    # -- shortcuts ----------------------------------------------------------

    def _target(self, v, side, a, b):
        """Shortcut target for pair (a, b) below ``v`` on ``side``; both must be large at ``v``."""
        if v.es.intersection_parts(a, b)[side] == 0:
            return None
        u = v.children[side]
        if u.leaf or a not in u.es.large_sets() or b not in u.es.large_sets():
            return u
        left, right = u.ptr[a][b]
        if left is not None and right is not None:
            return u
        return left if left is not None else right

    def _repair(self, v, dirty):
        if v.leaf:
            return
        ptr = v.ptr
        for a in dirty:
            row = ptr.pop(a, None)
            if row:
                for b in row:
                    ptr[b].pop(a, None)
        large = v.es.large_sets()
        work = 0
        for a in dirty:
            if a not in large:
                continue
            row = ptr.setdefault(a, {})
            for b in large:
                if b == a or b in row:
                    continue
                pair = [self._target(v, 0, a, b), self._target(v, 1, a, b)]
                row[b] = pair
                ptr.setdefault(b, {})[a] = pair
                work += 1
        self.stats["pointer_updates"] += work

    # -- queries ------------------------------------------------------------

    def _both_large(self, v, s1, s2):
        large = v.es.large_sets()
        return not v.leaf and s1 in large and s2 in large

    def report(self, s1, s2):
        """Every common element of the two sets, in no particular order."""
        a, b = self._get(s1), self._get(s2)
        self.stats["queries"] += 1
        if s1 == s2:
            self.last_query = {"type1": 0, "type2": 0, "output": len(a)}
            return list(a)
        out = []
        type1 = type2 = 0
        if a and b and self.root is not None:
            stack = [self.root]
            while stack:
                v = stack.pop()
                if self._both_large(v, s1, s2):
                    type1 += 1
                    left, right = v.ptr[s1][s2]
                    if right is not None:
                        stack.append(right)
                    if left is not None:
                        stack.append(left)
                else:
                    type2 += 1
                    for k in v.es.iter_intersection(s1, s2):
                        out.append(self._elem_of_key[k])
        self.last_query = {"type1": type1, "type2": type2, "output": len(out)}
        self.stats["type1"] += type1
        self.stats["type2"] += type2
        return out

    def witness(self, s1, s2):
        """One common element, or None."""
        a, b = self._get(s1), self._get(s2)
        self.stats["queries"] += 1
        if s1 == s2:
            return next(iter(a), None)
        if not a or not b or self.root is None:
            return None
        v = self.root
        hops = 0
        while self._both_large(v, s1, s2):
            hops += 1
            left, right = v.ptr[s1][s2]
            v = left if left is not None else right
            if v is None:
                self.stats["hops"] += hops
                return None
        self.stats["hops"] += hops
        for k in v.es.iter_intersection(s1, s2):
            return self._elem_of_key[k]
        return None

    def disjoint(self, s1, s2):
        return self.witness(s1, s2) is None

    # -- rebuilding ---------------------------------------------------------

    def rebuild(self, reason="manual"):
        """Renumber live elements compactly, pick a fresh permutation and rebuild the tree."""
        live = sorted(self._refs, key=self._code.__getitem__)
        need = len(live) + 1
        anchor = max(self.min_anchor, nearest_power_of_two(self.total))
        while 2 * anchor < need:
            anchor *= 2
        self.anchor = anchor
        self._reset_geometry()
        self._code = {e: i for i, e in enumerate(live)}
        self._next_code = len(live)
        self._elem_of_key = {self._perm(i): e for e, i in self._code.items()}
        keyed = {}
        for sid, s in self._sets.items():
            if s:
                keyed[sid] = [self._perm(self._code[e]) for e in s]
        self.root = self._build(0, self.universe, 0, keyed)
        self.stats["rebuilds"] += 1
        self.stats[f"rebuilds_{reason}"] += 1

    def _build(self, lo, hi, depth, keyed):
        if not keyed:
            return None
        v = _Vertex(lo, hi, depth, self._new_es(lo, hi, keyed))
        if not v.leaf:
            mid = v.mid
            halves = ({}, {})
            for sid, keys in keyed.items():
                left = [k for k in keys if k < mid]
                right = [k for k in keys if k >= mid]
                if left:
                    halves[0][sid] = left
                if right:
                    halves[1][sid] = right
            v.children[0] = self._build(lo, mid, depth + 1, halves[0])
            v.children[1] = self._build(mid, hi, depth + 1, halves[1])
            self._repair(v, set(v.es.large_sets()))
        return v

    # -- introspection ------------------------------------------------------

    def vertices(self):
        if self.root is None:
            return
        stack = [self.root]
        while stack:
            v = stack.pop()
            yield v
            for c in v.children:
                if c is not None:
                    stack.append(c)

    def internal_sets(self):
        """Set id -> set of internal keys."""
        return {sid: {self._key_of(e) for e in s} for sid, s in self._sets.items()}

    def space(self):
        """Sum of per-vertex budgets, in words."""
        return sum(v.es.M for v in self.vertices())

    def level_stats(self):
        """Per-depth totals of stored keys and budgets."""
        levels = {}
        for v in self.vertices():
            n, m = levels.get(v.depth, (0, 0))
            levels[v.depth] = (n + v.es.total, m + v.es.M)
        return [{"depth": d, "N_v": n, "M_v": m} for d, (n, m) in sorted(levels.items())]

    def debug_dump(self):
        """Plain-data view of every allocated vertex (for audits; not a stable API)."""
        out = []
        for v in self.vertices():
            snap = v.es.debug_snapshot()
            pointers = {}
            for a, row in v.ptr.items():
                for b, pair in row.items():
                    pointers[(a, b)] = tuple(None if t is None else (t.lo, t.hi) for t in pair)
            out.append({
                "range": (v.lo, v.hi),
                "depth": v.depth,
                "leaf": v.leaf,
                "total": v.es.total,
                "classes": snap["classes"],
                "tables": snap["tables"],
                "pointers": pointers,
            })
        return {"anchor": self.anchor, "universe": self.universe, "height": self.height, "vertices": out}
