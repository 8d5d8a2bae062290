# Bounded-size sets whose intersections cost about d log w / w word operations.
# %%
import random
from collections import Counter

import numpy as np

from setix.packed_sets import PackedFamily, bucket_count

rng = random.Random(1)
np.set_printoptions(suppress=True, precision=2)

# %% a small family
fam = PackedFamily(64, seed=7)
for x in (2, 3, 5, 7, 11, 13):
    fam.insert("primes", x)
for x in range(0, 40, 2):
    fam.insert("evens", x)
print(fam.intersection("primes", "evens"))
print(fam.witness("primes", "evens"))
print("buckets for d=64:", bucket_count(64))

# %% cost per query grows linearly in d, with a small slope
ds = np.array([64, 128, 256, 512, 1024])
cost = []
for d in ds:
    sets = {i: rng.sample(range(4 * d), d - 1) for i in range(2)}
    fam = PackedFamily.from_sets(d, sets, seed=rng.getrandbits(64))
    ops = Counter()
    fam.intersection(0, 1, ops)
    cost.append(ops["word_ops"])
cost = np.array(cost)
print(np.column_stack([ds, cost, cost / ds]))
slope = np.polyfit(np.log(ds), np.log(cost), 1)[0]
print("log-log slope %.2f" % slope)

# %% fingerprint collisions that survive to the exact check are rare
ops = Counter()
for _ in range(200):
    fam = PackedFamily(256, seed=rng.getrandbits(64))
    for s in (0, 1):
        for x in rng.sample(range(10**6), 255):
            fam.insert(s, x)
    fam.intersection(0, 1, ops)
print("false positives per query:", ops["false_positives"] / 200)
