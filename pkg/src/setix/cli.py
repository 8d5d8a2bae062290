"""Command-line front end: ``setix triangles | bench | selftest``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage or
I/O errors.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import dataclass

from .errors import GraphParseError
from .hashing import SEED_ENV, resolve_seed
from .oracle import oracle_triangles
from .triangle_enum import Graph, count_triangles, enumerate_triangles
from .word_ops import get_layout

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
CHECK_LIMIT = 300


@dataclass
class RunConfig:
    seed: int
    word_layout: int = 64
    input: str = None
    output: str = "-"
    count: bool = False
    sorted: bool = False
    check: bool = False
    threads: int = 1
    quick: bool = False
    reps: int = None
    schedules: int = 100
    inject_fault: str = None


# -- graph files ---------------------------------------------------------------


def parse_edgelist(lines):
    """Parse "u v" lines (``#`` comments, any whitespace) into a Graph.

    Labels are compacted to ``0..n-1`` in sorted order, integers numerically.
    Extra columns such as weights are ignored.
    """
    pairs = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphParseError(f"expected two vertex labels, got {line!r}", lineno)
        pairs.append((_label(parts[0]), _label(parts[1])))
    labels = sorted({x for p in pairs for x in p}, key=lambda x: (isinstance(x, str), x))
    index = {x: i for i, x in enumerate(labels)}
    edges = [(index[u], index[v]) for u, v in pairs]
    return Graph.from_edges(len(labels), edges, labels=labels)


def _label(tok):
    try:
        return int(tok)
    except ValueError:
        return tok


def load_graph(path, fmt="edgelist"):
    if fmt != "edgelist":
        raise ValueError(f"unsupported format {fmt!r}")
    if path == "-":
        return parse_edgelist(sys.stdin)
    with open(path, encoding="ascii", errors="strict") as f:
        return parse_edgelist(f)


def save_graph(g, path):
    labels = g.labels or list(range(g.n))
    with open(path, "w", encoding="ascii") as f:
        for u, v in g.edges:
            f.write(f"{labels[u]} {labels[v]}\n")


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="ascii") as f:
            yield f


# -- commands --------------------------------------------------------------------


def cmd_triangles(cfg):
    try:
        g = load_graph(cfg.input)
    except (OSError, UnicodeDecodeError, GraphParseError) as exc:
        print(f"setix: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if g.dropped_loops or g.dropped_duplicates:
        print(f"setix: dropped {g.dropped_loops} self-loops and {g.dropped_duplicates} duplicate edges",
              file=sys.stderr)
    layout = get_layout(cfg.word_layout)
    if cfg.count and not cfg.check and not cfg.sorted:
        result = count_triangles(g, seed=cfg.seed, layout=layout, threads=cfg.threads)
        triangles = None
    else:
        triangles = enumerate_triangles(g, seed=cfg.seed, layout=layout, threads=cfg.threads)
        result = len(triangles)
    if cfg.check:
        if g.n > CHECK_LIMIT:
            print(f"setix: --check needs n <= {CHECK_LIMIT}, graph has {g.n} vertices", file=sys.stderr)
            return EXIT_USAGE
        want = oracle_triangles(g.n, g.edges)
        if len(triangles) != len(set(triangles)) or set(triangles) != want:
            print(f"setix: check FAILED: {len(triangles)} listed, oracle has {len(want)}", file=sys.stderr)
            return EXIT_VERIFY
        print(f"setix: check ok ({len(want)} triangles)", file=sys.stderr)
    try:
        with _open_out(cfg.output) as out:
            if cfg.count:
                print(result, file=out)
            else:
                if cfg.sorted:
                    triangles.sort()
                labels = g.labels or range(g.n)
                for a, b, c in triangles:
                    print(labels[a], labels[b], labels[c], file=out)
    except OSError as exc:
        print(f"setix: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_bench(cfg):
    from .bench import run_bench

    try:
        with _open_out(cfg.output) as out:
            run_bench(cfg.seed, out, quick=cfg.quick, reps=cfg.reps, threads=cfg.threads,
                      layout=get_layout(cfg.word_layout))
    except OSError as exc:
        print(f"setix: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_selftest(cfg):
    from .selftest import run_selftest

    faults = {cfg.inject_fault} if cfg.inject_fault else set()
    try:
        with _open_out(cfg.output) as out:
            ok = run_selftest(cfg.seed, out, schedules=cfg.schedules, faults=faults)
    except OSError as exc:
        print(f"setix: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if ok else EXIT_VERIFY


# -- argument parsing ------------------------------------------------------------


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, help=f"64-bit seed (default: ${SEED_ENV}, else random)")
    common.add_argument("--output", "-o", default="-", help="output file, '-' for stdout")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--word-layout", type=int, choices=[64, 32], default=64,
                        help="packed word width (32 is the small test layout)")

    p = argparse.ArgumentParser(prog="setix", description="Packed set intersection tools.")
    sub = p.add_subparsers(dest="command", required=True)

    tri = sub.add_parser("triangles", parents=[common], help="list or count triangles in a graph")
    tri.add_argument("--input", "-i", required=True, help="edge-list file, '-' for stdin")
    tri.add_argument("--format", default="edgelist", choices=["edgelist"])
    tri.add_argument("--count", action="store_true", help="print only the number of triangles")
    tri.add_argument("--sorted", action="store_true", help="sort triples lexicographically")
    tri.add_argument("--check", action="store_true", help=f"compare with a brute-force oracle (n <= {CHECK_LIMIT})")

    bench = sub.add_parser("bench", parents=[common], help="operation-counter sweeps as CSV")
    bench.add_argument("--quick", action="store_true", help="smaller parameter points")
    bench.add_argument("--reps", type=_positive)

    st = sub.add_parser("selftest", parents=[common], help="randomized oracle checks")
    st.add_argument("--schedules", type=_positive, default=100, help="schedules per structure")
    st.add_argument("--inject-fault", help=argparse.SUPPRESS)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        seed = resolve_seed(args.seed)
    except ValueError:
        print(f"setix: ${SEED_ENV} is not an integer", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig(seed=seed, word_layout=args.word_layout, output=args.output, threads=args.threads)
    if args.command == "triangles":
        cfg.input, cfg.count, cfg.sorted, cfg.check = args.input, args.count, args.sorted, args.check
        return cmd_triangles(cfg)
    if args.command == "bench":
        cfg.quick, cfg.reps = args.quick, args.reps
        return cmd_bench(cfg)
    cfg.schedules, cfg.inject_fault = args.schedules, args.inject_fault
    return cmd_selftest(cfg)


if __name__ == "__main__":
    sys.exit(main())
