import math
import random

import pytest
from hypothesis import given, strategies as st

from setix.errors import DuplicateElementError, ElementNotFoundError, UnknownSetError
from setix.fully_dynamic import FeistelPermutation, IntersectionTree
from setix.oracle import audit_tree


def audit(tree):
    return audit_tree(tree.debug_dump(), tree.internal_sets())


@pytest.mark.parametrize("size", [1, 2, 5, 32, 100, 1024])
def test_feistel_is_a_bijection(size):
    perm = FeistelPermutation(size, random.Random(size))
    images = [perm(x) for x in range(size)]
    assert sorted(images) == list(range(size))
    assert all(perm.inverse(y) == x for x, y in enumerate(images))
    with pytest.raises(ValueError):
        perm(size)


def test_fresh_tree():
    tree = IntersectionTree(64, seed=1)
    assert tree.anchor == 16 and tree.height == 5
    tree.add_set("a")
    tree.add_set("b")
    assert tree.report("a", "b") == []
    assert tree.witness("a", "b") is None
    with pytest.raises(ValueError):
        IntersectionTree(0)


def test_first_insert_touches_one_path():
    tree = IntersectionTree(64, seed=1)
    tree.insert("a", 42)
    assert len(list(tree.vertices())) == tree.height
    depths = sorted(v.depth for v in tree.vertices())
    assert depths == list(range(tree.height))


def test_shared_element_and_its_removal():
    tree = IntersectionTree(256, seed=2)
    for x in range(20):
        tree.insert("a", x)
        tree.insert("b", x + 100)
    assert tree.disjoint("a", "b")
    tree.insert("b", 7)
    assert not tree.disjoint("a", "b")
    assert tree.report("a", "b") == [7]
    assert tree.witness("a", "b") == 7
    tree.delete("b", 7)
    assert tree.report("a", "b") == []
    assert audit(tree) == []


def test_self_report():
    tree = IntersectionTree(64, seed=1)
    for x in "xyz":
        tree.insert(0, x)
    assert sorted(tree.report(0, 0)) == ["x", "y", "z"]


def test_errors():
    tree = IntersectionTree(64, seed=1)
    tree.insert("a", 1)
    with pytest.raises(DuplicateElementError):
        tree.insert("a", 1)
    with pytest.raises(ElementNotFoundError):
        tree.delete("a", 2)
    with pytest.raises(UnknownSetError):
        tree.report("a", "nope")
    with pytest.raises(UnknownSetError):
        tree.delete("nope", 1)


def test_growth_across_power_of_two_rebuilds_once():
    tree = IntersectionTree(64, seed=3)
    for x in range(32):
        tree.insert(x % 2, x)
    assert tree.stats["rebuilds"] == 0
    tree.insert(0, 32)
    assert tree.stats["rebuilds"] == 1
    assert tree.anchor == 32
    assert max(tree._code.values()) < tree.universe


def test_mass_deletion_rebuilds_and_stays_correct():
    tree = IntersectionTree(512, seed=4)
    ref = {0: set(), 1: set()}
    for x in range(150):
        for s in (0, 1):
            tree.insert(s, x + 50 * s)
            ref[s].add(x + 50 * s)
    anchor = tree.anchor
    for x in sorted(ref[0])[:140]:
        tree.delete(0, x)
        ref[0].discard(x)
    for x in sorted(ref[1])[:140]:
        tree.delete(1, x)
        ref[1].discard(x)
    assert tree.anchor < anchor
    assert sorted(tree.report(0, 1)) == sorted(ref[0] & ref[1])
    assert audit(tree) == []


def test_key_exhaustion_triggers_rebuild():
    tree = IntersectionTree(64, seed=5)
    # churn through fresh elements without growing the total
    for x in range(100):
        tree.insert("a", x)
        if x >= 4:
            tree.delete("a", x - 4)
    assert tree.stats["rebuilds_keys"] >= 1
    assert sorted(tree.members("a")) == [96, 97, 98, 99]
    assert all(c < tree.universe for c in tree._code.values())


@given(
    st.sampled_from([8, 64, 512]),
    st.lists(st.tuples(st.booleans(), st.integers(0, 3), st.integers(0, 40)), max_size=150),
    st.integers(0, 2**64 - 1),
)
def test_random_schedules(M, ops, seed):
    tree = IntersectionTree(M, seed=seed)
    ref = {i: set() for i in range(4)}
    for i in ref:
        tree.add_set(i)
    for is_insert, s, x in ops:
        if is_insert and x not in ref[s]:
            tree.insert(s, x)
            ref[s].add(x)
        elif not is_insert and x in ref[s]:
            tree.delete(s, x)
            ref[s].discard(x)
    assert audit(tree) == []
    for a in ref:
        for b in ref:
            got = tree.report(a, b)
            assert sorted(got) == sorted(ref[a] & ref[b])
            w = tree.witness(a, b)
            assert (w is None) == (not ref[a] & ref[b])


def _loaded_tree(N, k, seed):
    rng = random.Random(seed)
    tree = IntersectionTree(N, seed=seed)
    ref = {i: set() for i in range(k)}
    for i in ref:
        tree.add_set(i)
    while tree.total < N:
        s = rng.randrange(k)
        x = rng.randrange(3 * N)
        if x not in ref[s]:
            tree.insert(s, x)
            ref[s].add(x)
    return tree, ref


def test_level_totals_and_space():
    tree, ref = _loaded_tree(2000, 6, 1)
    levels = tree.level_stats()
    assert len(levels) == tree.height
    assert all(lv["N_v"] == tree.total for lv in levels)
    assert sum(lv["M_v"] for lv in levels) == tree.space()
    assert tree.space() <= 8 * tree.M * math.log2(tree.anchor)


def test_dyadic_partition():
    tree, _ = _loaded_tree(1000, 4, 2)
    by_depth = {}
    for v in tree.vertices():
        by_depth.setdefault(v.depth, []).append((v.lo, v.hi))
    for depth, ranges in by_depth.items():
        ranges.sort()
        width = tree.universe >> depth
        assert all(hi - lo == width and lo % width == 0 for lo, hi in ranges)
        assert all(a[1] <= b[0] for a, b in zip(ranges, ranges[1:]))


def test_traversal_accounting():
    tree, ref = _loaded_tree(4000, 8, 3)
    seen_type1 = 0
    for a in ref:
        for b in ref:
            if a == b:
                continue
            out = tree.report(a, b)
            q = tree.last_query
            seen_type1 += q["type1"]
            assert q["type1"] <= q["type2"] + 1
            if out:
                assert q["type2"] <= len(out)
    assert seen_type1 > 0
