import itertools
import pickle
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from keeptree.graph import (Graph, GraphError, GraphFormatError, add_edges, encode_graph6, format_edge_list,
                            induced_subgraph, max_degree, min_degree, parse_edge_list, parse_graph, parse_graph6,
                            read_graph6_lines, remove_edges)


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def test_fixture_words():
    assert parse_graph6("@") == Graph.from_edges(1, [])
    assert parse_graph6("C~") == Graph.complete(4)
    assert parse_graph6("Bg") == Graph.path(3)
    for word in ("@", "C~", "Bg"):
        assert encode_graph6(parse_graph6(word)) == word


def test_petersen_word_frozen():
    # produced by an independent encoder, frozen here
    assert encode_graph6(Graph.petersen()) == "IheA@GUAo"
    assert parse_graph6("IheA@GUAo") == Graph.petersen()


def test_header_optional():
    assert parse_graph6(">>graph6<<C~") == Graph.complete(4)


def test_long_header_forms():
    for n in (62, 63, 64, 100):
        G = Graph.cycle(n)
        word = encode_graph6(G)
        assert word.startswith("~") == (n >= 63)
        assert parse_graph6(word) == G
        ref = nx.to_graph6_bytes(nx.cycle_graph(n), header=False).decode().strip()
        assert word == ref


def test_exhaustive_round_trip_small():
    for n in range(6):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            G = Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
            assert parse_graph6(encode_graph6(G)) == G


@settings(max_examples=300, deadline=None)
@given(graphs(10))
def test_round_trip_random(G):
    assert parse_graph6(encode_graph6(G)) == G


def test_agrees_with_networkx_encoder():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(0, 30)
        nxg = nx.gnp_random_graph(n, rng.random(), seed=rng.randrange(1 << 30))
        ours = Graph.from_edges(n, nxg.edges())
        ref = nx.to_graph6_bytes(nxg, header=False).decode().strip()
        assert encode_graph6(ours) == ref
        assert parse_graph6(ref) == ours


@pytest.mark.parametrize("word,offset", [("C~\x7f", 2), ("Bh", 1), ("C\x20", 1)])
def test_graph6_errors_have_offsets(word, offset):
    with pytest.raises(GraphFormatError) as exc:
        parse_graph6(word)
    if offset is not None:
        assert exc.value.offset == offset


def test_graph6_wrong_length():
    with pytest.raises(GraphFormatError) as exc:
        parse_graph6("E~~")
    assert exc.value.offset is not None
    with pytest.raises(GraphFormatError):
        parse_graph6("C~~")


def test_sparse6_rejected():
    with pytest.raises(GraphFormatError):
        parse_graph6(":Fa@x^")


def test_remove_edges_examples():
    K4 = Graph.complete(4)
    assert remove_edges(K4, []) == K4
    H = remove_edges(K4, [(0, 1)])
    assert [H.degree(v) for v in range(4)] == [2, 2, 3, 3]
    K6 = Graph.complete(6)
    H = remove_edges(K6, [(0, 1), (1, 2)])
    assert [H.degree(v) for v in range(6)] == [4, 3, 4, 5, 5, 5]


def test_remove_non_edge_rejected():
    with pytest.raises(GraphError):
        remove_edges(Graph.cycle(5), [(0, 2)])


@settings(max_examples=100, deadline=None)
@given(graphs(9), st.randoms(use_true_random=False))
def test_remove_then_add_restores(G, r):
    F = [e for e in G.edges() if r.random() < 0.5]
    H = remove_edges(G, F)
    assert H.vertices == G.vertices
    for v in G.vertices:
        assert H.degree(v) == G.degree(v) - sum(1 for e in F if v in e)
    assert add_edges(H, F) == G


def test_induced_subgraph_examples():
    K4 = Graph.complete(4)
    assert induced_subgraph(K4, range(4)) == K4
    assert induced_subgraph(K4, [0, 1]).edges() == [(0, 1)]
    P = induced_subgraph(Graph.cycle(5), [1, 2, 3])
    assert P.edges() == [(1, 2), (2, 3)]
    with pytest.raises(GraphError):
        induced_subgraph(K4, [0, 9])


@settings(max_examples=100, deadline=None)
@given(graphs(9), st.randoms(use_true_random=False))
def test_induced_monotone(G, r):
    assert induced_subgraph(G, G.vertices) == G
    U = [v for v in G.vertices if r.random() < 0.7]
    W = [v for v in U if r.random() < 0.7]
    big, small = induced_subgraph(G, U), induced_subgraph(G, W)
    assert set(small.edges()) <= set(big.edges())
    assert all(G.has_edge(*e) for e in big.edges())


def test_min_degree_examples():
    assert min_degree(Graph.complete(4)) == 3
    assert min_degree(Graph.path(3)) == 1
    assert min_degree(Graph.petersen()) == 3
    assert max_degree(Graph.petersen()) == 3
    with pytest.raises(GraphError):
        min_degree(Graph.from_edges(0, []))


def test_simple_graph_invariants():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph({0: [1], 1: []})
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1), (1, 0), (1, 2)])


def test_edge_list_round_trip_and_errors():
    G = Graph.petersen()
    assert parse_edge_list(format_edge_list(G)) == G
    assert parse_graph(format_edge_list(G)) == G
    assert parse_graph("IheA@GUAo\n") == G
    with pytest.raises(GraphFormatError) as exc:
        parse_edge_list("3 2\n0 1\n0 x\n")
    assert exc.value.line == 3
    with pytest.raises(GraphFormatError):
        parse_edge_list("3 2\n0 1\n")
    with pytest.raises(GraphFormatError):
        parse_edge_list("3 1\n0 3\n")


def test_read_lines_reports_per_line():
    out = list(read_graph6_lines("C~\nBh\n\nBg\n"))
    assert [ln for ln, _ in out] == [1, 2, 4]
    assert isinstance(out[1][1], GraphFormatError)
    assert out[2][1] == Graph.path(3)


def test_immutable_hashable_picklable():
    G = Graph.petersen()
    assert hash(G) == hash(pickle.loads(pickle.dumps(G)))
    assert pickle.loads(pickle.dumps(G)) == G
    with pytest.raises(AttributeError):
        G.foo = 1
