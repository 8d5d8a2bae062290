"""Randomized oracle-equivalence schedules for all four set structures.

Each schedule is a list of operations drawn from a seeded generator and
replayed against both the structure and a plain-``set`` oracle, with the
structure's internals checked after every step.  A failing schedule is
shrunk (prefix cut, then greedy single-op removal) before it is reported.
"""
from __future__ import annotations

import random

from . import emptiness
from .emptiness import EmptinessStructure
from .fully_dynamic import IntersectionTree
from .oracle import audit_tree
from .packed_sets import PackedFamily
from .witness import WitnessStructure


def _ops(rng, k, universe, length, p_query=0.2, inserts_only=False):
    """Grow/shrink phases with two hot sets, so sizes cross class thresholds both ways."""
    ops = []
    live = [set() for _ in range(k)]
    p_insert = 0.85
    for i in range(length):
        if not inserts_only and i % 40 == 0:
            p_insert = 0.85 if (i // 40) % 2 == 0 else 0.3
        if rng.random() < p_query:
            ops.append(("query", rng.randrange(k), rng.randrange(k)))
            continue
        s = rng.randrange(2) if rng.random() < 0.5 else rng.randrange(k)
        if inserts_only or not live[s] or rng.random() < p_insert:
            x = rng.randrange(universe)
            if x not in live[s]:
                live[s].add(x)
                ops.append(("insert", s, x))
        else:
            x = rng.choice(sorted(live[s]))
            live[s].discard(x)
            ops.append(("delete", s, x))
    return ops


class _Case:
    """One structure under test: builds a schedule and replays it."""

    name = ""
    inserts_only = False

    def params(self, rng):
        return {}

    def schedule(self, rng):
        p = self.params(rng)
        ops = _ops(rng, p["k"], p["universe"], p["length"], inserts_only=self.inserts_only)
        return p, ops

    def replay(self, p, ops):
        """Index and message of the first failing op, or None."""
        st = self.make(p)
        sets = [set() for _ in range(p["k"])]
        for i, op in enumerate(ops):
            kind, a, b = op
            try:
                if kind == "insert":
                    if b in sets[a] or not self.can_insert(p, sets[a]):
                        continue
                    self.insert(st, a, b)
                    sets[a].add(b)
                elif kind == "delete":
                    if b not in sets[a]:
                        continue
                    self.delete(st, a, b)
                    sets[a].discard(b)
                else:
                    msg = self.query(st, a, b, sets[a] & sets[b])
                    if msg:
                        return i, msg
                    continue
                msg = self.check(st, sets)
            except Exception as exc:  # any crash is a failure to report
                msg = f"{type(exc).__name__}: {exc}"
            if msg:
                return i, msg
        return None

    def can_insert(self, p, s):
        return True

    def check(self, st, sets):
        return None


class PackedCase(_Case):
    name = "packed_sets"

    def params(self, rng):
        d = rng.choice([4, 8, 16, 64])
        return {"d": d, "k": rng.randint(2, 6), "universe": 3 * d, "length": rng.randint(40, 160),
                "seed": rng.getrandbits(64)}

    def make(self, p):
        fam = PackedFamily(p["d"], seed=p["seed"])
        for s in range(p["k"]):
            fam.add_set(s)
        return fam

    def can_insert(self, p, s):
        return len(s) + 1 < p["d"]

    def insert(self, st, s, x):
        st.insert(s, x)

    def delete(self, st, s, x):
        st.delete(s, x)

    def query(self, st, a, b, want):
        got = st.intersection(a, b)
        if sorted(got) != sorted(want):
            return f"report({a}, {b}) = {sorted(got)}, expected {sorted(want)}"
        w = st.witness(a, b)
        if (w is None) != (not want) or (w is not None and w not in want):
            return f"witness({a}, {b}) = {w}, intersection {sorted(want)}"
        return None


class EmptinessCase(_Case):
    name = "emptiness"

    def params(self, rng):
        return {"M": rng.choice([4, 16, 64, 256]), "k": rng.randint(2, 8),
                "universe": rng.choice([20, 60]), "length": rng.randint(40, 200),
                "split": rng.choice([None, 10])}

    def make(self, p):
        es = EmptinessStructure(p["M"], split=p["split"])
        for s in range(p["k"]):
            es.add_set(s)
        return es

    def insert(self, st, s, x):
        st.insert(s, x)

    def delete(self, st, s, x):
        st.delete(s, x)

    def query(self, st, a, b, want):
        if st.disjoint(a, b) != (not want):
            return f"disjoint({a}, {b}) = {st.disjoint(a, b)}, intersection {sorted(want)}"
        return None

    def check(self, st, sets):
        snap = st.debug_snapshot()
        large = {s for s, c in snap["classes"].items() if c == "large"}
        for a, row in snap["tables"].items():
            if a in large and not large - {a} <= set(row):
                return f"table of large set {a} misses a large set"
            for b, counts in row.items():
                common = sets[a] & sets[b]
                if st.split is None:
                    want = (len(common),)
                else:
                    low = sum(1 for x in common if x < st.split)
                    want = (low, len(common) - low)
                if counts != want:
                    return f"T[{a}][{b}] = {counts}, expected {want}"
        return None


class WitnessCase(_Case):
    name = "witness"
    inserts_only = True

    def params(self, rng):
        return {"tau": rng.choice([1, 2, 4]), "k": rng.randint(2, 6),
                "universe": rng.choice([40, 120]), "length": rng.randint(40, 240),
                "seed": rng.getrandbits(64)}

    def make(self, p):
        ws = WitnessStructure(seed=p["seed"], tau_q=p["tau"])
        for s in range(p["k"]):
            ws.add_set(s)
        ws._prev_tables = {}
        return ws

    def insert(self, st, s, x):
        st.insert(s, x)

    def delete(self, st, s, x):
        raise AssertionError("witness schedules are insert-only")

    def query(self, st, a, b, want):
        w = st.witness(a, b)
        if (w is None) != (not want) or (w is not None and w not in want):
            return f"witness({a}, {b}) = {w}, intersection {sorted(want)}"
        return None

    def check(self, st, sets):
        tables = st.debug_snapshot()["tables"]
        for owner, row in tables.items():
            old_row = st._prev_tables.get(owner, {})
            for other, w in row.items():
                if w is not None and w not in sets[owner] & sets[other]:
                    return f"P[{owner}][{other}] = {w} is not a common element"
                old = old_row.get(other)
                if old is not None and w != old:
                    return f"P[{owner}][{other}] changed from {old} to {w}"
        st._prev_tables = tables
        return None


class TreeCase(_Case):
    name = "fully_dynamic"

    def params(self, rng):
        return {"M": rng.choice([8, 64, 512]), "k": rng.randint(2, 6),
                "universe": rng.choice([30, 200]), "length": rng.randint(40, 200),
                "seed": rng.getrandbits(64)}

    def make(self, p):
        tree = IntersectionTree(p["M"], seed=p["seed"])
        for s in range(p["k"]):
            tree.add_set(s)
        return tree

    def insert(self, st, s, x):
        st.insert(s, x)

    def delete(self, st, s, x):
        st.delete(s, x)

    def query(self, st, a, b, want):
        got = st.report(a, b)
        if sorted(got) != sorted(want):
            return f"report({a}, {b}) = {sorted(got)}, expected {sorted(want)}"
        w = st.witness(a, b)
        if (w is None) != (not want) or (w is not None and w not in want):
            return f"witness({a}, {b}) = {w}, intersection {sorted(want)}"
        return None

    def check(self, st, sets):
        problems = audit_tree(st.debug_dump(), st.internal_sets())
        return problems[0] if problems else None


CASES = [PackedCase(), EmptinessCase(), WitnessCase(), TreeCase()]


def minimize(case, p, ops, fail_at):
    """Shortest failing schedule found by cutting the tail, then dropping single ops."""
    ops = ops[: fail_at + 1]
    i = len(ops) - 1
    while i >= 0:
        trial = ops[:i] + ops[i + 1:]
        if case.replay(p, trial) is not None:
            ops = trial
        i -= 1
    return ops


def run_selftest(seed, out, schedules=100, faults=()):
    """Replay ``schedules`` schedules per structure; print one line each and return True iff all pass."""
    emptiness.FAULTS.update(faults)
    ok = True
    try:
        for case in CASES:
            total_ops = 0
            failure = None
            for i in range(schedules):
                sched_seed = random.Random(f"{seed}:{case.name}:{i}").getrandbits(64)
                p, ops = case.schedule(random.Random(sched_seed))
                total_ops += len(ops)
                res = case.replay(p, ops)
                if res is not None:
                    failure = (sched_seed, ops, p, res)
                    break
            if failure is None:
                print(f"{case.name}: {schedules} schedules, {total_ops} ops, ok", file=out)
                continue
            ok = False
            sched_seed, ops, p, (idx, msg) = failure
            small = minimize(case, p, ops, idx)
            print(f"{case.name}: FAIL schedule seed={sched_seed} at op {idx} of {len(ops)}: {msg}", file=out)
            print(f"{case.name}: minimized reproduction has {len(small)} ops: {small}", file=out)
    finally:
        emptiness.FAULTS.difference_update(faults)
    print("selftest passed" if ok else "selftest FAILED", file=out)
    return ok


def replay_seed(name, sched_seed):
    """Rebuild and replay the schedule behind a reported seed."""
    case = next(c for c in CASES if c.name == name)
    p, ops = case.schedule(random.Random(sched_seed))
    return case.replay(p, ops)
