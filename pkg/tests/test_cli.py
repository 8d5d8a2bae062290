import io
import random

import pytest

from setix.bench import HEADER, run_bench
from setix.cli import load_graph, main, parse_edgelist, save_graph
from setix.errors import GraphParseError
from setix.generators import erdos_renyi
from setix.selftest import run_selftest


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_k3():
    g = parse_edgelist(["0 1\n", "1 2\n", "2 0\n"])
    assert g.n == 3 and g.edges == [(0, 1), (0, 2), (1, 2)]


def test_parse_cleans_and_compacts():
    g = parse_edgelist(["# header\n", "10\t20  # trailing\n", "20 10\n", "30 30\n", "\n", "20 30 1.5\n"])
    assert g.labels == [10, 20, 30]
    assert g.edges == [(0, 1), (1, 2)]
    assert (g.dropped_loops, g.dropped_duplicates) == (1, 1)


def test_parse_error_has_line_number():
    with pytest.raises(GraphParseError) as err:
        parse_edgelist(["0 1\n", "# ok\n", "5\n"])
    assert err.value.lineno == 3
    assert "line 3" in str(err.value)


def test_empty_file_is_empty_graph(tmp_path):
    g = load_graph(write(tmp_path, ""))
    assert g.n == 0 and g.edges == []


def test_round_trip_large_graph(tmp_path):
    g = erdos_renyi(2000, 0.05, 1)
    assert g.m > 95000
    path = str(tmp_path / "big.txt")
    save_graph(g, path)
    back = load_graph(path)
    assert back.n == g.n and back.edges == g.edges


def test_count_k4(tmp_path, capsys):
    path = write(tmp_path, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    assert main(["triangles", "--input", path, "--count", "--seed", "1"]) == 0
    assert capsys.readouterr().out == "4\n"


def test_sorted_listing_uses_labels(tmp_path, capsys):
    path = write(tmp_path, "b c\na b\nc a\nc d\n")
    assert main(["triangles", "-i", path, "--sorted", "--seed", "2"]) == 0
    assert capsys.readouterr().out == "a b c\n"


def test_check_on_random_graph(tmp_path, capsys):
    g = erdos_renyi(60, 0.2, 5)
    path = str(tmp_path / "r.txt")
    save_graph(g, path)
    out = str(tmp_path / "tri.txt")
    assert main(["triangles", "-i", path, "--check", "--seed", "3", "-o", out, "--word-layout", "32"]) == 0
    assert "check ok" in capsys.readouterr().err
    assert len(open(out).read().splitlines()) > 0


def test_io_and_usage_errors(tmp_path, capsys):
    assert main(["triangles", "--input", str(tmp_path / "missing.txt")]) == 2
    assert "missing.txt" in capsys.readouterr().err
    assert main(["triangles", "--input", write(tmp_path, "1 2 \n3\n")]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["frobnicate"]) == 2
    assert main(["triangles"]) == 2
    assert main(["bench", "--seed", "-1"]) == 2


def test_seed_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SETIX_SEED", "77")
    outs = []
    for _ in range(2):
        assert main(["selftest", "--schedules", "3"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    monkeypatch.setenv("SETIX_SEED", "seven")
    assert main(["selftest", "--schedules", "1"]) == 2


def test_bench_csv_is_deterministic():
    runs = []
    for threads in (1, 2):
        buf = io.StringIO()
        run_bench(5, buf, quick=True, reps=2, threads=threads, only={"packed_sets", "emptiness"})
        runs.append(buf.getvalue())
    assert runs[0] == runs[1]
    lines = runs[0].splitlines()
    assert lines[0] == ",".join(HEADER)
    packed = [l.split(",") for l in lines[1:] if l.startswith("packed_sets") and ",word_ops," in l]
    assert [int(r[3]) for r in packed] == [128, 256, 512]
    means = [float(r[5]) for r in packed]
    assert means == sorted(means)


def test_selftest_passes_and_catches_fault():
    buf = io.StringIO()
    assert run_selftest(11, buf, schedules=5)
    assert buf.getvalue().endswith("selftest passed\n")
    buf = io.StringIO()
    assert not run_selftest(11, buf, schedules=30, faults={"skip-table-update"})
    text = buf.getvalue()
    assert "emptiness: FAIL schedule seed=" in text
    assert "minimized reproduction" in text


def test_selftest_fault_exit_code(capsys):
    assert main(["selftest", "--seed", "4", "--schedules", "30", "--inject-fault", "skip-table-update"]) == 1
    assert "selftest FAILED" in capsys.readouterr().out
