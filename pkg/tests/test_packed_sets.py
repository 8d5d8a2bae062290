import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from setix.errors import CapacityError, DuplicateElementError, ElementNotFoundError, UnknownSetError
from setix.packed_sets import PackedFamily, bucket_count
from setix.word_ops import LAYOUT32


def test_bucket_count():
    assert bucket_count(1) == 1
    assert bucket_count(64) == 6
    assert bucket_count(512) == 48
    assert bucket_count(64, LAYOUT32) == 10


def test_basic_queries():
    fam = PackedFamily(16, seed=1)
    for x in (1, 5, 9):
        fam.insert("a", x)
    for x in (5, 9, 11):
        fam.insert("b", x)
    assert sorted(fam.intersection("a", "b")) == [5, 9]
    assert fam.witness("a", "b") in (5, 9)
    fam.delete("a", 5)
    fam.delete("a", 9)
    assert fam.intersection("a", "b") == []
    assert fam.witness("a", "b") is None


def test_errors():
    fam = PackedFamily(4, seed=1)
    fam.insert(0, 10)
    with pytest.raises(DuplicateElementError):
        fam.insert(0, 10)
    with pytest.raises(ElementNotFoundError):
        fam.delete(0, 11)
    with pytest.raises(UnknownSetError):
        fam.intersection(0, 1)
    fam.insert(0, 11)
    fam.insert(0, 12)
    with pytest.raises(CapacityError):
        fam.insert(0, 13)
    with pytest.raises(ValueError):
        PackedFamily(0)


def test_from_sets_matches_incremental():
    rng = random.Random(2)
    sets = {i: rng.sample(range(500), rng.randint(0, 63)) for i in range(6)}
    bulk = PackedFamily.from_sets(64, sets, seed=9)
    inc = PackedFamily(64, seed=9)
    for sid, xs in sets.items():
        inc.add_set(sid)
        for x in xs:
            inc.insert(sid, x)
    for sid in sets:
        assert bulk.bucket_snapshot(sid) == inc.bucket_snapshot(sid)
        assert sorted(bulk.members(sid)) == sorted(sets[sid])


@given(
    st.sampled_from([4, 16, 64]),
    st.lists(st.tuples(st.booleans(), st.integers(0, 2), st.integers(0, 150)), max_size=120),
    st.integers(0, 2**64 - 1),
)
def test_random_schedules_match_sets(d, ops, seed):
    fam = PackedFamily(d, seed=seed)
    ref = {i: set() for i in range(3)}
    for i in ref:
        fam.add_set(i)
    for is_insert, s, x in ops:
        if is_insert and x not in ref[s] and len(ref[s]) + 1 < d:
            fam.insert(s, x)
            ref[s].add(x)
        elif not is_insert and x in ref[s]:
            fam.delete(s, x)
            ref[s].discard(x)
    for a in ref:
        assert fam.size(a) == len(ref[a])
        for b in ref:
            got = fam.intersection(a, b)
            assert sorted(got) == sorted(ref[a] & ref[b])
            w = fam.witness(a, b)
            assert (w is None) == (not ref[a] & ref[b])
            assert w is None or w in ref[a] & ref[b]


def test_false_positives_are_rare():
    # cross pairs of independent sets, sizes uniform in [1, d-1]
    rng = random.Random(11)
    d = 128
    ops = Counter()
    pairs = 300
    for i in range(pairs):
        fam = PackedFamily(d, seed=rng.getrandbits(64))
        for sid in (0, 1):
            for x in rng.sample(range(10**6), rng.randint(1, d - 1)):
                fam.insert(sid, x)
        fam.intersection(0, 1, ops)
    assert ops["false_positives"] / pairs < 1.0


def test_report_cost_grows_linearly_in_d():
    rng = random.Random(5)
    costs = []
    for d in (128, 256, 512):
        sets = {i: rng.sample(range(4 * d), d - 1) for i in range(2)}
        fam = PackedFamily.from_sets(d, sets, seed=3)
        ops = Counter()
        fam.intersection(0, 1, ops)
        costs.append(ops["word_ops"])
    assert costs[0] < costs[1] < costs[2]
    assert 1.6 < costs[2] / costs[1] < 2.4
