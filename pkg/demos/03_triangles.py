# Listing triangles through packed out-neighbourhood intersections.
# %%
from collections import Counter

import numpy as np

from setix.generators import attachment_graph, complete_graph, erdos_renyi
from setix.oracle import oracle_triangles
from setix.triangle_enum import count_triangles, enumerate_triangles, orient

# %%
print("K5:", count_triangles(complete_graph(5), seed=1))
ori = orient(complete_graph(5))
print("peeling order", ori.order, "out-degrees", [len(o) for o in ori.out_neighbors])

# %% agree with brute force on a random graph
g = erdos_renyi(80, 0.2, seed=3)
tri = enumerate_triangles(g, seed=3)
print(len(tri), "triangles; oracle agrees:", set(tri) == oracle_triangles(g.n, g.edges))

# %% fixed degeneracy: the work per edge stays flat as the graph grows
ms, per_edge = [], []
for m in (5_000, 20_000, 80_000):
    g = attachment_graph(m // 8, 8, seed=m)
    stats = Counter()
    enumerate_triangles(g, seed=1, stats=stats)
    ms.append(g.m)
    per_edge.append(stats["word_ops"] / g.m)
print(np.round(np.column_stack([ms, per_edge]), 1))
