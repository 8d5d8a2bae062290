"""Counter-based benchmark sweeps.

Every workload returns operation counts, not timings, so a fixed seed gives
the same CSV on every machine.  Repetitions draw their randomness from
``(seed, workload, param value, rep)`` and can run on several threads without
changing the output.
"""
from __future__ import annotations

import csv
import functools
import math
import random
import statistics
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

from .emptiness import EmptinessStructure
from .fully_dynamic import IntersectionTree
from .generators import attachment_graph
from .packed_sets import PackedFamily
from .triangle_enum import enumerate_triangles
from .witness import WitnessStructure
from .word_ops import LAYOUT64

HEADER = ["structure", "op", "param", "value", "counter", "mean", "stddev", "reps"]


def _rng(seed, *parts):
    return random.Random(":".join(str(p) for p in (seed, *parts)))


def packed_report(d, rng, layout=LAYOUT64, pairs=40):
    """Mean word operations and false positives per report query on sets of size d-1."""
    universe = 4 * d
    sets = {i: rng.sample(range(universe), d - 1) for i in range(2 * pairs)}
    fam = PackedFamily.from_sets(d, sets, seed=rng.getrandbits(64), layout=layout)
    ops = Counter()
    for i in range(pairs):
        fam.intersection(2 * i, 2 * i + 1, ops)
    return {"word_ops": ops["word_ops"] / pairs, "false_positives": ops["false_positives"] / pairs}


def _fresh(rng, members, universe):
    x = rng.randrange(universe)
    while x in members:
        x = rng.randrange(universe)
    return x


def emptiness_updates(N, rng):
    """Probes per update with M = N: N inserts, then N/2 delete+insert pairs over ~sqrt(N)/4 sets."""
    k = max(2, round(math.sqrt(N) / 4))
    es = EmptinessStructure(N)
    lists = [[] for _ in range(k)]
    universe = 4 * N
    updates = 0
    for _ in range(N):
        s = rng.randrange(k)
        x = _fresh(rng, es.members(s) if s in es else (), universe)
        es.insert(s, x)
        lists[s].append(x)
        updates += 1
    for _ in range(N // 2):
        s = rng.randrange(k)
        if lists[s]:
            i = rng.randrange(len(lists[s]))
            lists[s][i], lists[s][-1] = lists[s][-1], lists[s][i]
            es.delete(s, lists[s].pop())
            updates += 1
        s = rng.randrange(k)
        x = _fresh(rng, es.members(s), universe)
        es.insert(s, x)
        lists[s].append(x)
        updates += 1
    return {"probes": es.stats["probes"] / updates, "rebuilds": es.stats["rebuilds"]}


def triangle_edges(m, rng, layout=LAYOUT64):
    """Word operations per edge on a degeneracy-8 attachment graph with about m edges."""
    g = attachment_graph(m // 8 + 5, 8, rng)
    stats = Counter()
    tri = enumerate_triangles(g, seed=rng.getrandbits(64), layout=layout, stats=stats)
    return {"word_ops_per_edge": stats["word_ops"] / g.m, "triangles": len(tri)}


def witness_queries(N, rng):
    """Probes per witness query after N insertions: half into 4 hot sets, half over ~2 sqrt(N) sets."""
    k = max(2, round(2 * math.sqrt(N)))
    ws = WitnessStructure(seed=rng.getrandbits(64))
    universe = 2 * N
    def pick():
        return rng.randrange(4) if rng.random() < 0.5 else rng.randrange(k)

    for _ in range(N):
        s = pick()
        ws.add_set(s)
        ws.insert(s, _fresh(rng, ws.members(s), universe))
    queries = 200
    for _ in range(queries):
        ws.witness(pick(), pick())
    return {
        "query_probes": ws.stats["query_probes"] / queries,
        "stash_fraction": ws.stats["stash_queries"] / queries,
        "dumps": ws.stats["dumps"],
    }


def tree_reports(N, rng):
    """Vertices visited per report query on a tree with M = N."""
    k = max(2, round(math.sqrt(N) / 8))
    tree = IntersectionTree(N, seed=rng.getrandbits(64))
    universe = 4 * N
    for _ in range(N):
        s = rng.randrange(k)
        tree.add_set(s)
        tree.insert(s, _fresh(rng, tree.members(s), universe))
    queries = 100
    visited = output = 0
    for _ in range(queries):
        a, b = rng.sample(range(k), 2)
        tree.report(a, b)
        q = tree.last_query
        visited += q["type1"] + q["type2"]
        output += q["output"]
    return {
        "update_probes": tree.stats["probes"] / tree.stats["updates"],
        "visited": visited / queries,
        "output": output / queries,
    }


def sweeps(quick=False):
    """(structure, op, param, values, workload) for every sweep."""
    if quick:
        return [
            ("packed_sets", "report", "d", [128, 256, 512], packed_report),
            ("emptiness", "update", "N", [2**10, 2**11, 2**12], emptiness_updates),
            ("triangles", "enumerate", "m", [2000, 8000], triangle_edges),
            ("witness", "query", "N", [1024, 4096], witness_queries),
            ("fully_dynamic", "report", "N", [512, 2048], tree_reports),
        ]
    return [
        ("packed_sets", "report", "d", [128, 256, 512], packed_report),
        ("emptiness", "update", "N", [2**12, 2**13, 2**14, 2**15, 2**16], emptiness_updates),
        ("triangles", "enumerate", "m", [10**4, 3 * 10**4, 10**5], triangle_edges),
        ("witness", "query", "N", [2**12, 2**14, 2**16], witness_queries),
        ("fully_dynamic", "report", "N", [2**10, 2**12, 2**14], tree_reports),
    ]


def _fmt(x):
    return f"{x:.6g}"


def run_bench(seed, out, quick=False, reps=None, threads=1, only=None, layout=LAYOUT64):
    """Write the CSV to ``out`` and return the list of rows written.

    ``layout`` applies to the packed-set and triangle sweeps.
    """
    reps = reps or (2 if quick else 3)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    rows = []
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for structure, op, param, values, fn in sweeps(quick):
            if only and structure not in only:
                continue
            if fn in (packed_report, triangle_edges):
                fn = functools.partial(fn, layout=layout)
            for value in values:
                jobs = [_rng(seed, structure, value, r) for r in range(reps)]
                if pool is None:
                    results = [fn(value, r) for r in jobs]
                else:
                    results = list(pool.map(lambda r, v=value: fn(v, r), jobs))
                for counter in results[0]:
                    xs = [res[counter] for res in results]
                    sd = statistics.stdev(xs) if len(xs) > 1 else 0.0
                    row = [structure, op, param, value, counter, _fmt(statistics.fmean(xs)), _fmt(sd), reps]
                    writer.writerow(row)
                    rows.append(row)
                out.flush()
    finally:
        if pool is not None:
            pool.shutdown()
    return rows
