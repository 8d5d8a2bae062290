import random
from collections import Counter

import pytest

from setix.hashing import SEED_ENV, BucketHash, FingerprintHash, bucket_of, fingerprint_of, make_rng, resolve_seed
from setix.word_ops import LAYOUT32


def test_explicit_seed_wins(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "99")
    assert resolve_seed(5) == 5
    assert resolve_seed() == 99
    monkeypatch.setenv(SEED_ENV, "0x10")
    assert resolve_seed() == 16


def test_entropy_fallback(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    assert 0 <= resolve_seed() < 2**64


def test_same_seed_same_functions():
    h1, h2 = BucketHash(7, make_rng(1)), BucketHash(7, make_rng(1))
    keys = range(1000)
    assert [h1(k) for k in keys] == [h2(k) for k in keys]


def test_ranges():
    rng = random.Random(0)
    h = BucketHash(13, rng)
    fp = FingerprintHash(rng)
    fp32 = FingerprintHash(rng, LAYOUT32)
    for k in range(5000):
        assert 0 <= bucket_of(h, k) < 13
        assert 0 <= fingerprint_of(fp, k) < 64 * 64
        assert 0 <= fp32(k) < 32 * 32


def test_buckets_roughly_uniform():
    h = BucketHash(8, random.Random(4))
    counts = Counter(h(k) for k in range(80000))
    assert len(counts) == 8
    assert max(counts.values()) < 1.1 * 10000


def test_pair_collision_rate():
    # pairwise independence puts the collision probability of a fixed pair near 1/4096
    hits = 0
    trials = 20000
    rng = random.Random(8)
    for _ in range(trials):
        fp = FingerprintHash(rng)
        hits += fp(12345) == fp(67890)
    assert hits / trials < 3 / 4096


def test_bad_bucket_count():
    with pytest.raises(ValueError):
        BucketHash(0, random.Random())
