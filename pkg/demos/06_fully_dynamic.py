# Fully dynamic reporting over a tree of emptiness structures with shortcut pointers.
# %%
import random

import numpy as np

from setix.fully_dynamic import IntersectionTree
from setix.oracle import audit_tree

rng = random.Random(2)
tree = IntersectionTree(M=4096, seed=2)
ref = {s: set() for s in range(6)}
for s in ref:
    tree.add_set(s)

# %% insert, delete, and keep a plain-set mirror to compare against
for step in range(6000):
    s = rng.randrange(6)
    x = rng.randrange(4000)
    if x in ref[s]:
        tree.delete(s, x)
        ref[s].discard(x)
    else:
        tree.insert(s, x)
        ref[s].add(x)
print("total", tree.total, "anchor", tree.anchor, "height", tree.height, "rebuilds", tree.stats["rebuilds"])

# %% per-level totals and budgets
for level in tree.level_stats():
    print(level)
print("space", tree.space(), "words for M =", tree.M)

# %% every shortcut pointer matches a from-scratch recomputation
print("audit problems:", audit_tree(tree.debug_dump(), tree.internal_sets()))

# %% reporting: type-1 vertices follow pointers, type-2 vertices scan
rows = []
for a in range(6):
    for b in range(a + 1, 6):
        out = tree.report(a, b)
        assert sorted(out) == sorted(ref[a] & ref[b])
        q = tree.last_query
        rows.append((q["type1"], q["type2"], q["output"]))
print(np.array(rows))
print("witness for (0, 1):", tree.witness(0, 1))
