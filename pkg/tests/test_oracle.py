import random

import pytest

from setix.errors import DuplicateElementError, ElementNotFoundError, UnknownSetError
from setix.fully_dynamic import IntersectionTree
from setix.generators import complete_graph, erdos_renyi
from setix.oracle import (
    OracleFamily,
    audit_tree,
    degeneracy,
    hash_intersect,
    node_iterator_triangles,
    oracle_intersect,
    oracle_triangles,
)


def test_intersections_agree():
    rng = random.Random(1)
    for _ in range(300):
        a = sorted(rng.sample(range(100), rng.randint(0, 40)))
        b = sorted(rng.sample(range(100), rng.randint(0, 40)))
        assert oracle_intersect(a, b) == hash_intersect(a, b) == sorted(set(a) & set(b))


def test_oracle_family():
    fam = OracleFamily()
    fam.insert("x", 3)
    fam.insert("x", 1)
    fam.insert("y", 3)
    assert fam.intersect("x", "y") == [3]
    assert not fam.disjoint("x", "y")
    with pytest.raises(DuplicateElementError):
        fam.insert("x", 1)
    fam.delete("x", 3)
    assert fam.disjoint("x", "y")
    with pytest.raises(ElementNotFoundError):
        fam.delete("x", 3)
    with pytest.raises(UnknownSetError):
        fam.size("z")
    assert fam.total() == 2


def test_triangle_oracles_agree():
    rng = random.Random(2)
    for _ in range(1000):
        g = erdos_renyi(rng.randint(0, 25), rng.choice([0.1, 0.3, 0.6]), rng)
        assert oracle_triangles(g.n, g.edges) == node_iterator_triangles(g.n, g.edges)


def test_degeneracy_known_values():
    assert degeneracy(5, complete_graph(5).edges) == 4
    assert degeneracy(4, [(0, 1), (1, 2), (2, 3)]) == 1
    assert degeneracy(4, [(0, 1), (1, 2), (2, 3), (3, 0)]) == 2


def _busy_tree():
    tree = IntersectionTree(256, seed=3)
    rng = random.Random(3)
    for s in range(3):
        tree.add_set(s)
    for _ in range(300):
        s = rng.randrange(3)
        x = rng.randrange(60)
        if x not in tree.members(s):
            tree.insert(s, x)
    return tree


def test_audit_accepts_real_tree():
    tree = _busy_tree()
    assert audit_tree(tree.debug_dump(), tree.internal_sets()) == []


def test_audit_catches_tampering():
    tree = _busy_tree()
    dump = tree.debug_dump()
    victim, key = next(
        (v, k) for v in dump["vertices"] for k, pair in v["pointers"].items() if pair != (None, None)
    )
    victim["pointers"][key] = (None, None)
    assert audit_tree(dump, tree.internal_sets())
