"""Fully dynamic set family answering "are these two sets disjoint?".

Sets are classed small, medium or large against thresholds derived from the
size anchor ``anchor`` (N') and the space budget ``M``:

* large once ``|S| > 2 N'/sqrt(M)``, and it stays large while ``|S| >= N'/sqrt(M)``;
* medium if not large and ``|S| >= N'/sqrt(M)``;
* small otherwise.

Medium and large sets own a slot and an intersection-size table indexed by
the slots of the others.  Entries are shared between the two directions, so
``T[a][slot(b)]`` and ``T[b][slot(a)]`` are one object.  A set entering the
medium class snapshots the current slot holders and fills its table a few
entries per insertion, so the table is complete by the time it turns large.

When built with ``split``, every entry holds two counts: elements below and
at-or-above ``split``.  The fully dynamic tree uses that to learn which child
range an intersection lives in.

Rebuilding is amortized: once the total size leaves ``[N'/2, 2N']`` the
anchor is re-snapped and every class, slot and table is recomputed.
"""
from __future__ import annotations

import math
from collections import Counter
from enum import Enum

from .errors import DuplicateElementError, ElementNotFoundError, UnknownSetError

__all__ = ["SizeClass", "EmptinessStructure", "SlotAllocator", "nearest_power_of_two"]

MIN_ANCHOR = 16

# test hook: names of deliberately broken behaviours, see selftest
FAULTS = set()


class SizeClass(Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


SMALL, MEDIUM, LARGE = SizeClass.SMALL, SizeClass.MEDIUM, SizeClass.LARGE


def nearest_power_of_two(n):
    if n <= 1:
        return 1
    p = 1 << (n.bit_length() - 1)
    return p if n - p < 2 * p - n else 2 * p


class SlotAllocator:
    """Small integer ids with reuse of released ones (lowest first)."""

    def __init__(self):
        self._free = []
        self._next = 0

    def take(self):
        if self._free:
            return self._free.pop()
        self._next += 1
        return self._next - 1

    def release(self, slot):
        self._free.append(slot)
        self._free.sort(reverse=True)

    def __len__(self):
        return self._next - len(self._free)


class EmptinessStructure:
    """Dynamic disjointness queries with ``O(sqrt M)`` expected updates.

    Pass either a fixed budget ``M`` or ``density``; with ``density`` the budget
    is re-derived as ``density * anchor`` at every rebuild.
    """

    def __init__(self, M=None, *, density=None, split=None, min_anchor=MIN_ANCHOR):
        if density is None:
            if M is None or M < 1:
                raise ValueError("space budget M must be at least 1")
        elif density <= 0:
            raise ValueError("density must be positive")
        self._fixed_M = M
        self._density = density
        self.split = split
        self._parts = 1 if split is None else 2
        self.min_anchor = min_anchor
        self.anchor = min_anchor
        self.total = 0
        self._sets = {}
        self._cls = {}
        self._slot = {}
        self._slots = SlotAllocator()
        self._table = {}
        self._pending = {}
        self._quantum = {}
        self._large = set()
        self.large_changed = set()
        self.stats = Counter()
        self._set_budget()

    # -- parameters ---------------------------------------------------------

    def _set_budget(self):
        if self._density is None:
            self.M = self._fixed_M
        else:
            self.M = max(1, round(self._density * self.anchor))
        root = math.sqrt(self.M)
        self.low = self.anchor / root
        self.high = 2 * self.anchor / root

    @property
    def max_slots(self):
        return math.isqrt(self.M)

    def _part(self, x):
        return 0 if self.split is None or x < self.split else 1

    # -- set registry -------------------------------------------------------

    @classmethod
    def from_sets(cls, sets, M=None, *, density=None, split=None, min_anchor=MIN_ANCHOR):
        """Bulk build; ``sets`` maps set id to an iterable of keys."""
        st = cls(M, density=density, split=split, min_anchor=min_anchor)
        for sid, keys in sets.items():
            s = set(keys)
            st._sets[sid] = s
            st._cls[sid] = SMALL
            st.total += len(s)
        st.rebuild(count=False)
        return st

    def add_set(self, sid):
        if sid not in self._sets:
            self._sets[sid] = set()
            self._cls[sid] = SMALL

    def _get(self, sid):
        try:
            return self._sets[sid]
        except KeyError:
            raise UnknownSetError(sid) from None

    def __contains__(self, sid):
        return sid in self._sets

    def members(self, sid):
        return self._get(sid)

    def size(self, sid):
        return len(self._get(sid))

    def size_class(self, sid):
        self._get(sid)
        return self._cls[sid]

    def is_large(self, sid):
        return sid in self._large

    def large_sets(self):
        return self._large

    def set_ids(self):
        return list(self._sets)

    # -- updates ------------------------------------------------------------

    def insert(self, sid, x):
        s = self._sets.get(sid)
        if s is None:
            self.add_set(sid)
            s = self._sets[sid]
        self.stats["probes"] += 1
        if x in s:
            raise DuplicateElementError(x)
        s.add(x)
        self.total += 1
        self.stats["updates"] += 1
        if self._cls[sid] is not SMALL:
            self._adjust(sid, x, 1)
        self._reclassify(sid)
        if sid in self._pending:
            self._catch_up(sid, self._quantum[sid])
        self._maybe_rebuild()

    def delete(self, sid, x):
        s = self._get(sid)
        self.stats["probes"] += 1
        if x not in s:
            raise ElementNotFoundError(x)
        s.remove(x)
        self.total -= 1
        self.stats["updates"] += 1
        if self._cls[sid] is not SMALL:
            self._adjust(sid, x, -1)
        self._reclassify(sid)
        self._maybe_rebuild()

    def _adjust(self, sid, x, delta):
        table = self._table[sid]
        part = self._part(x)
        sets = self._sets
        probes = 0
        for other, slot in self._slot.items():
            if other == sid:
                continue
            probes += 1
            if x in sets[other]:
                entry = table.get(slot)
                if entry is not None and "skip-table-update" not in FAULTS:
                    entry[part] += delta
        self.stats["probes"] += probes

    def _reclassify(self, sid):
        size = len(self._sets[sid])
        old = self._cls[sid]
        if old is LARGE:
            if size >= self.low:
                return
            new = SMALL
        elif size > self.high:
            new = LARGE
        elif size >= self.low:
            new = MEDIUM
        else:
            new = SMALL
        if new is old:
            return
        if new is SMALL:
            self._leave(sid)
        elif old is SMALL:
            self._enter(sid)
        self._cls[sid] = new
        if new is LARGE:
            self._catch_up(sid, None)
            self._large.add(sid)
        else:
            self._large.discard(sid)

    def _enter(self, sid):
        self._pending[sid] = dict.fromkeys(self._slot)
        n = len(self._slot)
        self._quantum[sid] = max(1, math.ceil(2 * n * math.sqrt(self.M) / self.anchor))
        self._slot[sid] = self._slots.take()
        self._table[sid] = {}
        self.stats["probes"] += n

    def _leave(self, sid):
        slot = self._slot.pop(sid)
        self._slots.release(slot)
        del self._table[sid]
        for table in self._table.values():
            table.pop(slot, None)
        self._pending.pop(sid, None)
        self._quantum.pop(sid, None)
        for pend in self._pending.values():
            pend.pop(sid, None)
        self._large.discard(sid)
        self.stats["probes"] += len(self._slot) + len(self._pending)

    def _catch_up(self, sid, quantum):
        pend = self._pending.get(sid)
        if pend is None:
            return
        done = 0
        while pend and (quantum is None or done < quantum):
            other = next(iter(pend))
            del pend[other]
            self._compute_pair(sid, other)
            done += 1
        self.stats["catch_up"] += done
        if not pend:
            del self._pending[sid]
            del self._quantum[sid]

    def _compute_pair(self, a, b):
        sa, sb = self._sets[a], self._sets[b]
        if len(sa) > len(sb):
            sa, sb = sb, sa
        counts = [0] * self._parts
        for x in sa:
            if x in sb:
                counts[self._part(x)] += 1
        self.stats["probes"] += len(sa)
        self._table[a][self._slot[b]] = counts
        self._table[b][self._slot[a]] = counts

    # -- rebuilding ---------------------------------------------------------

    def _maybe_rebuild(self):
        n = self.total
        if n > 2 * self.anchor or (n < self.anchor / 2 and self.anchor > self.min_anchor):
            self.rebuild()

    def rebuild(self, count=True):
        """Re-snap the anchor to the current size and recompute everything."""
        old_large = self._large
        self.anchor = max(self.min_anchor, nearest_power_of_two(self.total))
        self._set_budget()
        self._slot = {}
        self._slots = SlotAllocator()
        self._table = {}
        self._pending = {}
        self._quantum = {}
        self._large = set()
        for sid, s in self._sets.items():
            size = len(s)
            if size > self.high:
                c = LARGE
            elif size >= self.low:
                c = MEDIUM
            else:
                c = SMALL
            self._cls[sid] = c
            if c is not SMALL:
                self._slot[sid] = self._slots.take()
                self._table[sid] = {}
                if c is LARGE:
                    self._large.add(sid)
        members = list(self._slot)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                self._compute_pair(a, b)
        self.large_changed = old_large ^ self._large
        if count:
            self.stats["rebuilds"] += 1

    # -- queries ------------------------------------------------------------

    def _scan_order(self, s1, s2):
        a, b = self._get(s1), self._get(s2)
        l1, l2 = s1 in self._large, s2 in self._large
        if l1 and not l2:
            return b, a
        if l2 and not l1:
            return a, b
        return (a, b) if len(a) <= len(b) else (b, a)

    def disjoint(self, s1, s2):
        """True iff the two sets share no element."""
        self.stats["queries"] += 1
        a, b = self._get(s1), self._get(s2)
        if s1 == s2:
            return not a
        if s1 in self._large and s2 in self._large:
            self.stats["query_probes"] += 1
            return sum(self._table[s1][self._slot[s2]]) == 0
        small, big = self._scan_order(s1, s2)
        probes = 0
        for x in small:
            probes += 1
            if x in big:
                self.stats["query_probes"] += probes
                return False
        self.stats["query_probes"] += probes
        return True

    def intersection_parts(self, s1, s2):
        """Stored per-part intersection sizes; only meaningful when both sets are large."""
        return self._table[s1][self._slot[s2]]

    def iter_intersection(self, s1, s2):
        """Yield common elements by scanning the smaller (or non-large) set."""
        small, big = self._scan_order(s1, s2)
        for x in small:
            self.stats["query_probes"] += 1
            if x in big:
                yield x

    # -- introspection ------------------------------------------------------

    def debug_snapshot(self):
        """Classes, slots and table contents keyed by set id (not a stable API)."""
        by_slot = {slot: sid for sid, slot in self._slot.items()}
        tables = {}
        for sid, table in self._table.items():
            tables[sid] = {by_slot[slot]: tuple(v) for slot, v in table.items()}
        return {
            "anchor": self.anchor,
            "M": self.M,
            "low": self.low,
            "high": self.high,
            "total": self.total,
            "classes": {sid: c.value for sid, c in self._cls.items()},
            "slots": dict(self._slot),
            "tables": tables,
            "pending": {sid: list(p) for sid, p in self._pending.items()},
        }
