import random
from collections import Counter
from math import comb

import pytest

from setix.generators import attachment_graph, complete_graph, erdos_renyi
from setix.oracle import degeneracy, oracle_triangles
from setix.triangle_enum import Graph, count_triangles, enumerate_triangles, orient
from setix.word_ops import LAYOUT32


def test_k3_and_star():
    assert enumerate_triangles(complete_graph(3), seed=1) == [(0, 1, 2)]
    star = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
    assert enumerate_triangles(star, seed=1) == []


@pytest.mark.parametrize("n", range(3, 11))
def test_complete_graphs(n):
    assert count_triangles(complete_graph(n), seed=n) == comb(n, 3)


def test_graph_cleaning():
    g = Graph.from_edges(3, [(0, 1), (1, 0), (1, 1), (1, 2)])
    assert g.edges == [(0, 1), (1, 2)]
    assert (g.dropped_loops, g.dropped_duplicates) == (1, 1)
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])


def test_orientation_k4():
    ori = orient(complete_graph(4))
    assert sorted(len(o) for o in ori.out_neighbors) == [0, 1, 2, 3]


def test_orientation_is_acyclic_and_bounded():
    rng = random.Random(4)
    for _ in range(20):
        g = erdos_renyi(rng.randint(5, 80), rng.choice([0.05, 0.2, 0.5]), rng)
        ori = orient(g)
        pos = {u: i for i, u in enumerate(ori.order)}
        for u, out in enumerate(ori.out_neighbors):
            assert all(pos[u] < pos[v] for v in out)
        assert sum(len(o) for o in ori.out_neighbors) == g.m
        assert ori.max_out_degree == degeneracy(g.n, g.edges)


@pytest.mark.parametrize("layout", [64, LAYOUT32], ids=["w64", "w32"])
def test_random_graphs_match_oracle(layout):
    rng = random.Random(7)
    for _ in range(15):
        g = erdos_renyi(rng.randint(1, 60), rng.choice([0.05, 0.2, 0.5]), rng)
        tri = enumerate_triangles(g, seed=rng.getrandbits(64), layout=layout)
        assert len(tri) == len(set(tri))
        assert set(tri) == oracle_triangles(g.n, g.edges)


def test_threads_give_same_answer():
    g = erdos_renyi(120, 0.2, 3)
    one = enumerate_triangles(g, seed=5)
    four = enumerate_triangles(g, seed=5, threads=4)
    assert sorted(one) == sorted(four)
    assert count_triangles(g, seed=5, threads=3) == len(one)


def test_stats_counters():
    g = attachment_graph(300, 8, 2)
    stats = Counter()
    enumerate_triangles(g, seed=1, stats=stats)
    assert stats["edges"] == g.m
    assert 0 < stats["edge_queries"] <= g.m
    assert stats["word_ops"] > 0


def test_empty_graph():
    assert enumerate_triangles(Graph.from_edges(0, []), seed=1) == []
