# Dynamic disjointness: large sets keep intersection-size tables.
# %%
import math
import random

import numpy as np

from setix import bench
from setix.emptiness import EmptinessStructure

np.set_printoptions(suppress=True)

# %% classes follow the size relative to anchor / sqrt(M)
es = EmptinessStructure(16)
for x in range(10):
    es.insert("big", x)
    es.insert("other", x + 5)
print(es.size_class("big"), es.size_class("other"))
print("disjoint?", es.disjoint("big", "other"))
print(es.debug_snapshot()["tables"])

# %% demotion uses hysteresis: a large set stays large until it falls below the low threshold
for x in range(10, 4, -1):
    es.delete("big", x - 1)
    print(es.size("big"), es.size_class("big").value)

# %% with M = N the update cost grows like sqrt(N)
Ns = np.array([2**e for e in range(10, 16)])
probes = np.array([bench.emptiness_updates(int(N), random.Random(int(N)))["probes"] for N in Ns])
print(np.round(np.column_stack([Ns, probes, probes / np.sqrt(Ns)]), 3))
print("ratio per doubling", np.round(probes[1:] / probes[:-1], 3), "sqrt 2 =", round(math.sqrt(2), 3))
