import json

import pytest

from bruteforce import kappa
from keeptree.cli import RunConfig, UsageError, main
from keeptree.graph import Graph, encode_graph6, remove_edges
from keeptree.oracle import count_removable
from keeptree.trees import TreePattern, parse_parent_array


@pytest.fixture
def k6(tmp_path):
    p = tmp_path / "k6.g6"
    p.write_text(encode_graph6(Graph.complete(6)) + "\n")
    return str(p)


def _edges(text):
    return [tuple(map(int, ln.split())) for ln in text.splitlines() if ln and not ln.startswith("#")]


def test_find_k6_path(k6, capsys):
    assert main(["find", "--graph", k6, "--tree", "3 0 1", "--mode", "vertex"]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("# verified 3-connected")
    edges = _edges(out)
    assert len(edges) == 2 and len({v for e in edges for v in e}) == 3
    rest = remove_edges(Graph.complete(6), edges)
    assert kappa(rest.n, rest.edges()) >= 3
    # the oracle agrees that removable copies exist
    assert count_removable(Graph.complete(6), TreePattern.path(3)) > 0


def test_find_edge_mode(k6, capsys):
    assert main(["find", "--graph", k6, "--tree", "3 0 1", "--mode", "edge"]) == 0
    assert "verified 3-edge-connected" in capsys.readouterr().out


def test_find_failure_bundle(tmp_path, capsys):
    g = tmp_path / "c5.g6"
    g.write_text(encode_graph6(Graph.cycle(5)) + "\n")
    assert main(["find", "--graph", str(g), "--tree", "3 0 1"]) == 1
    cap = capsys.readouterr()
    assert "reason:" in cap.out and "warning:" in cap.err


def test_gen_trees(capsys):
    assert main(["gen-trees", "--m", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    trees = [parse_parent_array(x) for x in lines]
    assert sorted(T.is_star for T in trees) == [False, True]
    assert any(T.is_isomorphic(TreePattern.path(4)) for T in trees)


def test_verify_non_edge(tmp_path, capsys):
    g = tmp_path / "c5.g6"
    g.write_text(encode_graph6(Graph.cycle(5)) + "\n")
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n0 2\n")
    assert main(["verify", "--graph", str(g), "--tree-embedding", str(bad)]) == 1
    assert "rejected" in capsys.readouterr().out


def test_verify_accept_and_reject(k6, tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("0 1\n1 2\n")
    assert main(["verify", "--graph", k6, "--tree-embedding", str(good), "--tree", "3 0 1"]) == 0
    assert capsys.readouterr().out.startswith("accepted")
    assert main(["verify", "--graph", k6, "--tree-embedding", str(good), "--tree", "4 0 1 2"]) == 1
    capsys.readouterr()
    star = tmp_path / "star.txt"
    star.write_text("0 1\n0 2\n0 3\n")
    assert main(["verify", "--graph", k6, "--tree-embedding", str(star)]) == 1
    assert "not 3-connected" in capsys.readouterr().out


def test_oracle_command(k6, tmp_path, capsys):
    assert main(["oracle", "--graph", k6, "--tree", "3 0 1"]) == 0
    assert "verified 3-connected" in capsys.readouterr().out
    g = tmp_path / "k4.g6"
    g.write_text("C~\n")
    assert main(["oracle", "--graph", str(g), "--tree", "3 0 1"]) == 1


def test_usage_errors(k6, tmp_path, capsys):
    assert main(["find", "--graph", str(tmp_path / "missing.g6"), "--tree", "3 0 1"]) == 2
    assert main(["find", "--graph", k6, "--tree", "3 0 5"]) == 2
    assert main(["bogus"]) == 2
    assert main(["explore", "--m", "3"]) == 2
    assert main(["explore", "--m", "x", "--labeled", "6:5"]) == 2
    assert main(["find", "--graph", k6, "--tree", "3 0 1", "--max-steps", "0"]) == 2
    with pytest.raises(UsageError):
        RunConfig(command="find", mode="both")


def test_parse_error_reports_path_and_line(tmp_path, capsys):
    g = tmp_path / "bad.txt"
    g.write_text("4 2\n0 1\n0 x\n")
    assert main(["find", "--graph", str(g), "--tree", "3 0 1"]) == 2
    err = capsys.readouterr().err
    assert str(g) in err and "line 3" in err


def test_explore_corpus_and_determinism(tmp_path, capsys):
    corpus = tmp_path / "c.g6"
    corpus.write_text("E~~w\nBh\nF~~~w\n")
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["explore", "--corpus", str(corpus), "--m", "3", "--out", str(out1)]) == 0
    assert main(["explore", "--corpus", str(corpus), "--m", "3", "--out", str(out2), "--workers", "2"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    recs = [json.loads(x) for x in out1.read_text().splitlines()]
    assert any("error" in r for r in recs)
    assert all(r["agreement"] for r in recs if "error" not in r)
    assert "counterexamples: 0" in capsys.readouterr().err


def test_explore_random_reproducible(tmp_path, monkeypatch):
    monkeypatch.setenv("KEEPTREE_WORKERS", "1")
    outs = []
    for name in ("a", "b"):
        p = tmp_path / name
        assert main(["explore", "--random", "3", "--m", "3", "--engine", "finder", "--seed", "4",
                     "--out", str(p), "--timings", str(tmp_path / "t")]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_find_byte_identical(tmp_path):
    g = tmp_path / "k7.g6"
    g.write_text(encode_graph6(Graph.complete(7)) + "\n")
    a, b = tmp_path / "a", tmp_path / "b"
    for p in (a, b):
        assert main(["find", "--graph", str(g), "--tree", "4 0 0 0", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_workers_env_validation(monkeypatch):
    monkeypatch.setenv("KEEPTREE_WORKERS", "many")
    assert main(["explore", "--labeled", "6:5", "--m", "3"]) == 2
