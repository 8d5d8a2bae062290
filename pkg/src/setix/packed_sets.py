"""Bounded-size set family with word-packed intersection queries.

Every set is split into ``num_buckets`` buckets by a shared hash ``h``.  A
bucket keeps the sorted fingerprints of its members packed into words, plus
a chained table from fingerprint back to the members that produced it.
Intersecting two sets merges matching buckets, reads the repeated
fingerprints off the merged words, and verifies each candidate through the
chains.
"""
from __future__ import annotations

import math
from collections import Counter

from .errors import CapacityError, DuplicateElementError, ElementNotFoundError, UnknownSetError
from .hashing import BucketHash, FingerprintHash, make_rng
from .word_ops import (
    LAYOUT64,
    PackedList,
    delete_field,
    find_duplicates,
    get_layout,
    insert_field,
    merge_sorted_words,
    pack_fields,
)

__all__ = ["Bucket", "PackedFamily", "bucket_count"]


def bucket_count(d, layout=LAYOUT64):
    layout = get_layout(layout)
    return max(1, math.ceil(d * layout.log_w / layout.w))


class Bucket:
    __slots__ = ("fps", "members")

    def __init__(self, layout):
        self.fps = PackedList.empty(layout)
        self.members = {}

    def __len__(self):
        return self.fps.length


class PackedFamily:
    """A family of sets, each strictly smaller than ``d``.

    Not safe for concurrent mutation; concurrent queries are fine as long as
    each thread passes its own ``ops`` counter.
    """

    def __init__(self, d, seed=None, layout=LAYOUT64):
        if d < 1:
            raise ValueError("cap d must be at least 1")
        self.layout = get_layout(layout)
        self.d = d
        self.num_buckets = bucket_count(d, self.layout)
        rng = make_rng(seed)
        self.h = BucketHash(self.num_buckets, rng)
        self.fingerprint = FingerprintHash(rng, self.layout)
        self._sets = {}
        self._sizes = {}
        self.stats = Counter()

    @classmethod
    def from_sets(cls, d, sets, seed=None, layout=LAYOUT64):
        """Build a family from a mapping ``set id -> iterable of keys`` in linear time."""
        fam = cls(d, seed=seed, layout=layout)
        h, fp = fam.h, fam.fingerprint
        for sid, keys in sets.items():
            keys = list(keys)
            if len(keys) >= d:
                raise CapacityError(f"set {sid!r} has {len(keys)} elements, cap is {d}")
            buckets = fam._new_buckets()
            for e in keys:
                chain = buckets[h(e)].members.setdefault(fp(e), [])
                if e in chain:
                    raise DuplicateElementError(e)
                chain.append(e)
            for b in buckets:
                if b.members:
                    vals = []
                    for value, chain in b.members.items():
                        vals.extend([value] * len(chain))
                    vals.sort()
                    b.fps = pack_fields(vals, fam.layout)
            fam._sets[sid] = buckets
            fam._sizes[sid] = len(keys)
        return fam

    def _new_buckets(self):
        return [Bucket(self.layout) for _ in range(self.num_buckets)]

    def _buckets(self, sid):
        try:
            return self._sets[sid]
        except KeyError:
            raise UnknownSetError(sid) from None

    def add_set(self, sid):
        if sid not in self._sets:
            self._sets[sid] = self._new_buckets()
            self._sizes[sid] = 0

    def remove_set(self, sid):
        self._buckets(sid)
        del self._sets[sid]
        del self._sizes[sid]

    def __contains__(self, sid):
        return sid in self._sets

    def set_ids(self):
        return list(self._sets)

    def size(self, sid):
        self._buckets(sid)
        return self._sizes[sid]

    def members(self, sid):
        out = []
        for b in self._buckets(sid):
            for chain in b.members.values():
                out.extend(chain)
        return out

    def contains(self, sid, e):
        b = self._buckets(sid)[self.h(e)]
        chain = b.members.get(self.fingerprint(e))
        return chain is not None and e in chain

    def insert(self, sid, e):
        if sid not in self._sets:
            self.add_set(sid)
        buckets = self._sets[sid]
        b = buckets[self.h(e)]
        fp = self.fingerprint(e)
        chain = b.members.get(fp)
        if chain is not None and e in chain:
            raise DuplicateElementError(e)
        if self._sizes[sid] + 1 >= self.d:
            raise CapacityError(f"set {sid!r} is at the cap d={self.d}")
        b.fps = insert_field(b.fps, fp, self.stats)
        if chain is None:
            b.members[fp] = [e]
        else:
            chain.append(e)
        self._sizes[sid] += 1

    def delete(self, sid, e):
        b = self._buckets(sid)[self.h(e)]
        fp = self.fingerprint(e)
        chain = b.members.get(fp)
        if chain is None or e not in chain:
            raise ElementNotFoundError(e)
        b.fps = delete_field(b.fps, fp, self.stats)
        chain.remove(e)
        if not chain:
            del b.members[fp]
        self._sizes[sid] -= 1

    def _scan(self, s1, s2, ops, first_only):
        A = self._buckets(s1)
        B = self._buckets(s2)
        out = []
        false_pos = 0
        for ba, bb in zip(A, B):
            ops["word_ops"] += 1
            if not ba.members or not bb.members:
                continue
            merged = merge_sorted_words(ba.fps, bb.fps, ops)
            last = -1
            for idx in find_duplicates(merged, ops):
                value = merged.field(idx)
                if value == last:
                    continue
                last = value
                ca = ba.members.get(value)
                cb = bb.members.get(value)
                if ca is None or cb is None:
                    continue
                hits = 0
                for e in ca:
                    if e in cb:
                        hits += 1
                        out.append(e)
                        if first_only:
                            ops["false_positives"] += false_pos
                            return out
                false_pos += len(ca) * len(cb) - hits
        ops["false_positives"] += false_pos
        return out

    def intersection(self, s1, s2, ops=None):
        """All of ``s1 & s2``, in no particular order."""
        ops = self.stats if ops is None else ops
        ops["queries"] += 1
        return self._scan(s1, s2, ops, first_only=False)

    def witness(self, s1, s2, ops=None):
        """Some element of ``s1 & s2``, or None when they are disjoint."""
        ops = self.stats if ops is None else ops
        ops["queries"] += 1
        found = self._scan(s1, s2, ops, first_only=True)
        return found[0] if found else None

    def bucket_snapshot(self, sid):
        """Per-bucket (fingerprint values, chain table) pairs for inspection."""
        return [(b.fps.values(), {k: list(v) for k, v in b.members.items()}) for b in self._buckets(sid)]
