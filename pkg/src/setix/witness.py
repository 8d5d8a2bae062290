"""Insert-only set family answering witness queries.

With anchor ``N'`` and speedup ``tau`` (``w / log2(w)**2`` rounded, so 2 for
64-bit words) the classes are

* small:  ``|S| <  ceil(sqrt(N'/tau))``
* medium: up to ``floor(sqrt(N' * tau))`` elements
* large:  anything bigger.

Medium and large sets keep a stash in a :class:`PackedFamily` whose cap is
just above ``sqrt(N' * tau)``.  A medium set's stash is the whole set; a
large set's stash holds its latest insertions and is dumped into the set's
primary part whenever it is full.  Each large set owns a slot, and every set
of size at least ``sqrt(N'/(2 tau))`` keeps a witness table mapping large
slots to an element of ``S & primary(large set)`` (or None).  That table is
filled a few entries per insertion before the set turns medium.  Entries are
write-once: once a witness is found it is never replaced.
"""
from __future__ import annotations

import math
from collections import Counter

from .emptiness import MIN_ANCHOR, SMALL, MEDIUM, LARGE, SlotAllocator, nearest_power_of_two
from .errors import DuplicateElementError, UnknownSetError
from .hashing import make_rng
from .packed_sets import PackedFamily
from .word_ops import LAYOUT64, get_layout

__all__ = ["WitnessStructure", "default_tau"]


def default_tau(layout=LAYOUT64):
    layout = get_layout(layout)
    return max(1, round(layout.w / layout.log_w ** 2))


class WitnessStructure:
    """Incremental witness queries in ``O(sqrt(N'/tau))`` expected time."""

    def __init__(self, seed=None, tau_q=None, layout=LAYOUT64, min_anchor=MIN_ANCHOR):
        self.layout = get_layout(layout)
        self.tau_q = default_tau(self.layout) if tau_q is None else tau_q
        if self.tau_q < 1:
            raise ValueError("tau_q must be at least 1")
        self._rng = make_rng(seed)
        self.min_anchor = min_anchor
        self.anchor = min_anchor
        self.total = 0
        self._sets = {}
        self._cls = {}
        self._primary = {}
        self._stash_size = {}
        self._slot = {}
        self._by_slot = {}
        self._slots = SlotAllocator()
        self._table = {}
        self._pending = {}
        self._quantum = {}
        self.stats = Counter()
        self._set_thresholds()
        self._family = self._new_family()

    def _set_thresholds(self):
        t = self.tau_q
        self.table_at = max(1, math.ceil(math.sqrt(self.anchor / (2 * t))))
        self.medium_at = max(1, math.ceil(math.sqrt(self.anchor / t)))
        self.stash_cap = math.isqrt(self.anchor * t)
        self.d = math.ceil(math.sqrt(self.anchor * t)) + 1

    def _new_family(self):
        return PackedFamily(self.d, seed=self._rng.getrandbits(64), layout=self.layout)

    # -- registry -----------------------------------------------------------

    def add_set(self, sid):
        if sid not in self._sets:
            self._sets[sid] = set()
            self._cls[sid] = SMALL

    def _get(self, sid):
        try:
            return self._sets[sid]
        except KeyError:
            raise UnknownSetError(sid) from None

    def size(self, sid):
        return len(self._get(sid))

    def size_class(self, sid):
        self._get(sid)
        return self._cls[sid]

    def members(self, sid):
        return self._get(sid)

    # -- insertion ----------------------------------------------------------

    def insert(self, sid, x):
        s = self._sets.get(sid)
        if s is None:
            self.add_set(sid)
            s = self._sets[sid]
        if x in s:
            raise DuplicateElementError(x)
        s.add(x)
        self.total += 1
        self.stats["inserts"] += 1
        size = len(s)
        cls = self._cls[sid]

        table = self._table.get(sid)
        if table is not None:
            probes = 0
            for slot, w in table.items():
                if w is None:
                    probes += 1
                    if x in self._primary[self._by_slot[slot]]:
                        table[slot] = x
            self.stats["probes"] += probes
        elif size >= self.table_at:
            self._start_table(sid)
        if sid in self._pending:
            self._catch_up(sid, self._quantum[sid])

        stash_x = cls is not SMALL
        if cls is SMALL and size >= self.medium_at:
            self._catch_up(sid, None)
            self._family.add_set(sid)
            for e in s:
                if e != x:
                    self._family.insert(sid, e)
            self._stash_size[sid] = size - 1
            self.stats["probes"] += size
            cls = self._cls[sid] = MEDIUM
            stash_x = True
        if cls is MEDIUM and size > self.stash_cap:
            self._promote(sid)
            cls = LARGE
        if stash_x:
            if cls is LARGE and self._stash_size[sid] >= self.stash_cap:
                self.dump_stash(sid)
            self._family.insert(sid, x)
            self._stash_size[sid] += 1

        if self.total > 2 * self.anchor:
            self.rebuild()

    def _start_table(self, sid):
        self._table[sid] = {}
        self._pending[sid] = dict.fromkeys(self._slot)
        window = max(1, self.medium_at - self.table_at)
        self._quantum[sid] = max(1, math.ceil(2 * len(self._slot) / window))

    def _catch_up(self, sid, quantum):
        pend = self._pending.get(sid)
        if pend is None:
            return
        s = self._sets[sid]
        table = self._table[sid]
        done = 0
        while pend and (quantum is None or done < quantum):
            other = next(iter(pend))
            del pend[other]
            table[self._slot[other]] = self._first_common(s, self._primary[other])
            done += 1
        self.stats["catch_up"] += done
        if not pend:
            del self._pending[sid]
            del self._quantum[sid]

    def _first_common(self, a, b):
        if len(a) > len(b):
            a, b = b, a
        n = 0
        for x in a:
            n += 1
            if x in b:
                self.stats["probes"] += n
                return x
        self.stats["probes"] += n
        return None

    def _promote(self, sid):
        slot = self._slots.take()
        self._slot[sid] = slot
        self._by_slot[slot] = sid
        self._primary[sid] = set()
        self._cls[sid] = LARGE
        # the primary part starts empty, so every existing table gets a null entry
        for owner, table in self._table.items():
            if owner != sid:
                table[slot] = None
        self.stats["probes"] += len(self._table)

    def dump_stash(self, sid):
        """Move a large set's stash into its primary part."""
        if self._cls.get(sid) is not LARGE:
            raise ValueError(f"set {sid!r} is not large")
        stash = self._family.members(sid)
        if not stash:
            return
        slot = self._slot[sid]
        stash_set = set(stash)
        work = 0
        for owner, table in self._table.items():
            if owner == sid or table.get(slot, 0) is not None:
                continue
            if self._cls[owner] is MEDIUM:
                before = self._family.stats["word_ops"]
                w = self._family.witness(owner, sid)
                work += 1 + (self._family.stats["word_ops"] - before) // self.layout.merge_cost
            else:
                w = self._first_common(self._sets[owner], stash_set)
                work += min(len(self._sets[owner]), len(stash_set))
            if w is not None:
                table[slot] = w
        for e in stash:
            self._family.delete(sid, e)
        self._primary[sid] |= stash_set
        self._stash_size[sid] = 0
        work += len(stash)
        self.stats["dumps"] += 1
        self.stats["dump_work"] += work

    # -- queries ------------------------------------------------------------

    def witness(self, s1, s2):
        """An element of both sets, or None when they are disjoint."""
        a, b = self._get(s1), self._get(s2)
        self.stats["queries"] += 1
        if s1 == s2:
            return next(iter(a), None)
        c1, c2 = self._cls[s1], self._cls[s2]
        if c1 is SMALL or c2 is SMALL:
            if c1 is SMALL and (c2 is not SMALL or len(a) <= len(b)):
                small, big = a, b
            else:
                small, big = b, a
            n = 0
            for x in small:
                n += 1
                if x in big:
                    self.stats["query_probes"] += n
                    return x
            self.stats["query_probes"] += n
            return None
        if c2 is LARGE:
            w = self._table[s1].get(self._slot[s2])
            if w is not None:
                return w
        if c1 is LARGE:
            w = self._table[s2].get(self._slot[s1])
            if w is not None:
                return w
        self.stats["stash_queries"] += 1
        return self._family.witness(s1, s2)

    # -- rebuilding ---------------------------------------------------------

    def rebuild(self):
        old = {}
        for owner, table in self._table.items():
            for slot, w in table.items():
                if w is not None:
                    old[(owner, self._by_slot[slot])] = w
        self.anchor = max(self.min_anchor, nearest_power_of_two(self.total))
        self._set_thresholds()
        self._primary = {}
        self._stash_size = {}
        self._slot = {}
        self._by_slot = {}
        self._slots = SlotAllocator()
        self._table = {}
        self._pending = {}
        self._quantum = {}
        stashes = {}
        for sid, s in self._sets.items():
            size = len(s)
            if size > self.stash_cap:
                self._cls[sid] = LARGE
                slot = self._slots.take()
                self._slot[sid] = slot
                self._by_slot[slot] = sid
                self._primary[sid] = set(s)
                stashes[sid] = ()
            elif size >= self.medium_at:
                self._cls[sid] = MEDIUM
                stashes[sid] = s
            else:
                self._cls[sid] = SMALL
            if self._cls[sid] is not SMALL:
                self._stash_size[sid] = len(stashes[sid])
        self._family = PackedFamily.from_sets(
            self.d, stashes, seed=self._rng.getrandbits(64), layout=self.layout
        )
        for sid, s in self._sets.items():
            if len(s) < self.table_at:
                continue
            table = self._table[sid] = {}
            for other, slot in self._slot.items():
                if other == sid:
                    continue
                w = old.get((sid, other))
                table[slot] = w if w is not None else self._first_common(s, self._primary[other])
        self.stats["rebuilds"] += 1

    # -- introspection ------------------------------------------------------

    def debug_snapshot(self):
        return {
            "anchor": self.anchor,
            "tau_q": self.tau_q,
            "table_at": self.table_at,
            "medium_at": self.medium_at,
            "stash_cap": self.stash_cap,
            "d": self.d,
            "classes": {sid: c.value for sid, c in self._cls.items()},
            "stash": {sid: set(self._family.members(sid)) for sid in self._stash_size},
            "primary": {sid: set(p) for sid, p in self._primary.items()},
            "tables": {
                owner: {self._by_slot[slot]: w for slot, w in table.items()}
                for owner, table in self._table.items()
            },
            "pending": {sid: list(p) for sid, p in self._pending.items()},
        }
