import random

import pytest
from hypothesis import given, strategies as st

from setix.emptiness import LARGE, MEDIUM, SMALL
from setix.errors import DuplicateElementError, UnknownSetError
from setix.witness import WitnessStructure, default_tau
from setix.word_ops import LAYOUT32


def test_default_tau():
    assert default_tau() == 2
    assert default_tau(LAYOUT32) == 1


def test_thresholds_at_min_anchor():
    ws = WitnessStructure(seed=1)
    assert (ws.anchor, ws.tau_q) == (16, 2)
    assert (ws.table_at, ws.medium_at, ws.stash_cap, ws.d) == (2, 3, 5, 7)


def test_class_walk_and_dumps():
    ws = WitnessStructure(seed=1)
    ws.add_set("b")
    classes = []
    for x in range(14):
        ws.insert("a", x)
        classes.append(ws.size_class("a"))
    assert classes[0] is SMALL
    assert MEDIUM in classes
    assert classes[-1] is LARGE
    assert ws.stats["dumps"] >= 1
    ws.insert("b", 3)
    assert ws.witness("a", "b") == 3


def test_dump_stash_requires_large():
    ws = WitnessStructure(seed=1)
    ws.insert("a", 1)
    with pytest.raises(ValueError):
        ws.dump_stash("a")


def test_errors():
    ws = WitnessStructure(seed=1)
    ws.insert(0, 1)
    with pytest.raises(DuplicateElementError):
        ws.insert(0, 1)
    with pytest.raises(UnknownSetError):
        ws.witness(0, 9)
    with pytest.raises(ValueError):
        WitnessStructure(tau_q=0)


@given(
    st.sampled_from([1, 2, 4]),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 80)), max_size=250),
    st.integers(0, 2**64 - 1),
)
def test_schedules_sound_complete_write_once(tau, ops, seed):
    ws = WitnessStructure(seed=seed, tau_q=tau)
    ref = {i: set() for i in range(5)}
    for i in ref:
        ws.add_set(i)
    prev = {}
    for s, x in ops:
        if x in ref[s]:
            continue
        ws.insert(s, x)
        ref[s].add(x)
        tables = ws.debug_snapshot()["tables"]
        for owner, row in tables.items():
            for other, w in row.items():
                assert w is None or w in ref[owner] & ref[other]
                old = prev.get(owner, {}).get(other)
                assert old is None or old == w
        prev = tables
    for a in ref:
        for b in ref:
            w = ws.witness(a, b)
            assert (w is None) == (not ref[a] & ref[b])
            assert w is None or w in ref[a] & ref[b]


def test_tables_exact_against_primary():
    rng = random.Random(9)
    ws = WitnessStructure(seed=9)
    for _ in range(1500):
        s = rng.randrange(6)
        x = rng.randrange(600)
        ws.add_set(s)
        if x not in ws.members(s):
            ws.insert(s, x)
    snap = ws.debug_snapshot()
    assert snap["primary"]
    for owner, row in snap["tables"].items():
        for other, w in row.items():
            common = ws.members(owner) & snap["primary"][other]
            assert (w is None) == (not common)


def test_rebuild_keeps_answers():
    ws = WitnessStructure(seed=4)
    for x in range(100):
        ws.insert(x % 4, x // 2)
    assert ws.stats["rebuilds"] >= 2
    assert ws.anchor >= 64
    for a in range(4):
        for b in range(4):
            common = ws.members(a) & ws.members(b)
            w = ws.witness(a, b)
            assert (w is None) == (not common)
