"""Multiply-add-shift hash families and seed plumbing.

Both hashes draw an odd 128-bit multiplier and a 128-bit offset, compute
``(a*x + b) mod 2**128`` for a 64-bit key ``x`` and keep the top bits, which
is a pairwise-independent family for 64-bit keys.
"""
from __future__ import annotations

import os
import random
import secrets

from .word_ops import LAYOUT64, get_layout

SEED_ENV = "SETIX_SEED"

_MASK64 = (1 << 64) - 1
_MASK128 = (1 << 128) - 1


def resolve_seed(seed=None):
    """Explicit seed, else ``$SETIX_SEED``, else OS entropy."""
    if seed is not None:
        return int(seed) & _MASK64
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env, 0) & _MASK64
    return secrets.randbits(64)


def make_rng(seed=None):
    return random.Random(resolve_seed(seed))


def _draw_params(rng):
    a = rng.getrandbits(128) | 1
    b = rng.getrandbits(128)
    return a, b


class BucketHash:
    """Maps keys to ``[0, num_buckets)``."""

    def __init__(self, num_buckets, rng):
        if num_buckets < 1:
            raise ValueError("num_buckets must be positive")
        self.num_buckets = num_buckets
        self.a, self.b = _draw_params(rng)

    def __call__(self, key):
        top = (((self.a * (key & _MASK64) + self.b) & _MASK128) >> 64)
        return (top * self.num_buckets) >> 64


class FingerprintHash:
    """Maps keys to ``[0, w**2)`` so a fingerprint fills a field minus its control bit."""

    def __init__(self, rng, layout=LAYOUT64):
        layout = get_layout(layout)
        self.bits = 2 * layout.log_w
        self.range = 1 << self.bits
        self.a, self.b = _draw_params(rng)
        self._shift = 128 - self.bits

    def __call__(self, key):
        return ((self.a * (key & _MASK64) + self.b) & _MASK128) >> self._shift


def bucket_of(h, key):
    return h(key)


def fingerprint_of(h, key):
    return h(key)
