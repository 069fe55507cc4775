"""Exhaustive ground truth and corpus exploration.

Everything here is brute force: embeddings are enumerated by backtracking, small
graphs are enumerated as labeled adjacency masks, and :func:`explore` runs the
constructive finder and the exhaustive oracle side by side over a corpus.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .connectivity import connectivity_predicate
from .graph import Graph, GraphFormatError, encode_graph6, min_degree, remove_edges
from .trees import Embedding, TreePattern, enumerate_trees

ORACLE_LIMIT = 12
LABELED_LIMIT = 7


def _pattern_order(T: TreePattern) -> list[tuple[int, int | None]]:
    order, parent, seen = [], {0: None}, {0}
    queue = [0]
    while queue:
        v = queue.pop(0)
        order.append((v, parent[v]))
        for c in sorted(T.adj[v]):
            if c not in seen:
                seen.add(c)
                parent[c] = v
                queue.append(c)
    return order


def enumerate_tree_embeddings(G: Graph, T: TreePattern) -> Iterator[Embedding]:
    """Every labeled embedding of ``T`` into ``G`` (one per injective edge-preserving map)."""
    order = _pattern_order(T)
    need = [T.degree(v) for v in range(T.order)]
    phi: dict[int, int] = {}
    used: set[int] = set()

    def rec(i):
        if i == len(order):
            yield Embedding.of(T, phi)
            return
        c, p = order[i]
        pool = G.vertices if p is None else sorted(G.neighbors(phi[p]))
        for h in pool:
            if h in used or G.degree(h) < need[c]:
                continue
            phi[c] = h
            used.add(h)
            yield from rec(i + 1)
            used.discard(h)
            del phi[c]

    if T.order <= G.n:
        yield from rec(0)


def removable_embeddings(G: Graph, T: TreePattern, mode: str = "vertex", k: int = 3) -> Iterator[Embedding]:
    """Embeddings whose edge removal keeps the ``k``-(edge-)connectivity test, one per image edge set."""
    pred = connectivity_predicate(mode, k)
    seen: set[frozenset] = set()
    for emb in enumerate_tree_embeddings(G, T):
        key = emb.image_edges
        if key in seen:
            continue
        seen.add(key)
        if pred(remove_edges(G, key)):
            yield emb


def oracle_find(G: Graph, T: TreePattern, mode: str = "vertex", k: int = 3) -> Embedding | None:
    return next(removable_embeddings(G, T, mode, k), None)


def count_removable(G: Graph, T: TreePattern, mode: str = "vertex", k: int = 3) -> int:
    """Number of distinct edge sets ``E(T')`` that can be removed."""
    return sum(1 for _ in removable_embeddings(G, T, mode, k))


def enumerate_graphs_labeled(n: int, min_deg: int, k: int, mode: str = "vertex") -> Iterator[Graph]:
    """All labeled graphs on ``range(n)`` with minimum degree ``min_deg`` passing the ``k`` test.

    Masks follow the order of ``itertools.combinations(range(n), 2)``, bit ``i`` for pair ``i``.
    """
    if n > LABELED_LIMIT:
        raise ValueError(f"labeled enumeration is limited to n <= {LABELED_LIMIT}; use a graph6 corpus")
    if n < 0:
        raise ValueError("n must be non-negative")
    pairs = list(itertools.combinations(range(n), 2))
    pred = connectivity_predicate(mode, k)
    if not pairs:
        G = Graph.from_edges(n, [])
        if (n == 0 or min_deg <= 0) and pred(G):
            yield G
        return
    inc = np.zeros((len(pairs), n), dtype=np.int16)
    for i, (u, v) in enumerate(pairs):
        inc[i, u] = inc[i, v] = 1
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(len(pairs))) & 1).astype(np.int16)
    deg = bits @ inc
    keep = np.nonzero(deg.min(axis=1) >= min_deg)[0]
    for idx in keep:
        row = bits[idx]
        G = Graph.from_edges(n, [pairs[i] for i in np.nonzero(row)[0]])
        if pred(G):
            yield G


def random_near_regular(n: int, lo: int, hi: int, rng: random.Random, tries: int = 100) -> Graph:
    """Random simple graph on ``n`` vertices with every degree in ``[lo, hi]``."""
    if not 0 <= lo <= hi < n:
        raise ValueError(f"degree window [{lo}, {hi}] impossible for n={n}")
    for _ in range(tries):
        target = [rng.randint(lo, hi) for _ in range(n)]
        adj = [set() for _ in range(n)]
        order = list(range(n))
        for _ in range(4 * n * hi):
            short = [v for v in order if len(adj[v]) < target[v]]
            if not short:
                break
            u = rng.choice(short)
            cand = [v for v in short if v != u and v not in adj[u]]
            if not cand:
                cand = [v for v in range(n) if v != u and v not in adj[u] and len(adj[v]) < hi]
            if not cand:
                break
            v = rng.choice(cand)
            adj[u].add(v)
            adj[v].add(u)
        if all(lo <= len(a) <= hi for a in adj):
            return Graph({v: adj[v] for v in range(n)})
    raise RuntimeError(f"could not sample a graph with degrees in [{lo}, {hi}] on {n} vertices")


def joined_cliques(size: int, bridges: int = 3) -> Graph:
    """Two disjoint ``K_size`` joined by a matching of ``bridges`` edges ``i -- size + i``."""
    edges = [(i, j) for i, j in itertools.combinations(range(size), 2)]
    edges += [(size + i, size + j) for i, j in itertools.combinations(range(size), 2)]
    edges += [(i, size + i) for i in range(bridges)]
    return Graph.from_edges(2 * size, edges)


@dataclass
class ExploreReport:
    corpus: str
    records: list[dict] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    timings: list[float] = field(default_factory=list)

    @property
    def finder_failures(self) -> list[dict]:
        return [r for r in self.records if r["hypotheses"] and r["finder"] == "failure"]

    @property
    def disagreements(self) -> list[dict]:
        return [r for r in self.records if r["agreement"] is False]

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.records]
        lines += [json.dumps({"error": e}, sort_keys=True) for e in self.errors]
        return "".join(line + "\n" for line in lines)

    def summary(self) -> str:
        hyp = [r for r in self.records if r["hypotheses"]]
        ok = sum(1 for r in hyp if r["finder"] == "success")
        finder_ran = sum(1 for r in hyp if r["finder"] != "skipped")
        fallback = sum(1 for r in hyp if r.get("fallback"))
        return "\n".join([
            f"corpus: {self.corpus}",
            f"instances: {len(self.records)}",
            f"hypotheses hold: {len(hyp)}",
            f"finder success: {ok}/{finder_ran} (needed fallback: {fallback})",
            f"oracle runs: {sum(1 for r in self.records if r['oracle'] != 'skipped')}",
            f"disagreements: {len(self.disagreements)}",
            f"counterexamples: {len(self.counterexamples)}",
            f"parse errors: {len(self.errors)}",
        ]) + "\n"


def _instance(task):
    gid, G, trees, k, mode, engine, oracle_limit, count_all = task
    from .search import hypotheses_hold, search_with_fallback

    pred = connectivity_predicate(mode, k)
    graph_ok = pred(G)
    out = []
    for T in trees:
        t0 = time.perf_counter()
        hyp = bool(graph_ok and G.n > 0 and min_degree(G) >= k + T.order - 1)
        rec = {"graph": gid, "graph6": encode_graph6(G), "tree": T.to_parent_array(), "mode": mode, "k": k,
               "hypotheses": hyp, "finder": "skipped", "fallback": None, "oracle": "skipped", "agreement": None}
        found = None
        if engine in ("finder", "both") and k == 3:
            if hyp and not hypotheses_hold(G, T, mode):
                raise AssertionError("hypothesis filters disagree")
            res = search_with_fallback(G, T, mode, oracle_limit=0)
            if res.success and not pred(remove_edges(G, res.embedding.image_edges)):
                raise AssertionError("finder returned an unverified embedding")
            rec["finder"] = "success" if res.success else "failure"
            rec["fallback"] = res.fallback
            if res.failure is not None:
                rec["failure"] = res.failure.reason
                if not res.success:
                    rec["bundle"] = res.failure.bundle()
        if engine in ("oracle", "both") and G.n <= oracle_limit:
            found = oracle_find(G, T, mode, k)
            rec["oracle"] = "found" if found is not None else "none"
            if found is not None:
                rec["witness"] = sorted(map(list, found.image_edges))
            if count_all:
                rec["count"] = count_removable(G, T, mode, k)
        if rec["finder"] != "skipped" and rec["oracle"] != "skipped":
            rec["agreement"] = (rec["finder"] == "success") == (rec["oracle"] == "found")
        out.append((rec, time.perf_counter() - t0))
    return out


def explore(corpus: Iterable, m_values: Iterable[int], k: int = 3, mode: str = "vertex", engine: str = "both",
            workers: int = 1, *, name: str = "corpus", oracle_limit: int = ORACLE_LIMIT,
            count_all: bool = False) -> ExploreReport:
    """Run the finder and/or oracle on every (graph, tree of order m) pair.

    ``corpus`` yields graphs, ``(id, graph)`` pairs, or ``(lineno, GraphFormatError)``
    pairs as produced by :func:`keeptree.graph.read_graph6_lines`. The finder only
    runs for ``k == 3``. With ``count_all`` the oracle also records how many
    removable copies exist, not just whether one does.
    """
    if engine not in ("finder", "oracle", "both"):
        raise ValueError(f"unknown engine {engine!r}")
    trees = [T for m in sorted(set(m_values)) for T in enumerate_trees(m)]
    report = ExploreReport(name)
    tasks = []
    for i, item in enumerate(corpus):
        gid, G = item if isinstance(item, tuple) else (i, item)
        if isinstance(G, GraphFormatError):
            report.errors.append({"line": gid, "message": str(G)})
            continue
        tasks.append((gid, G, trees, k, mode, engine, oracle_limit, count_all))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_instance, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_instance(t) for t in tasks]
    for chunk in results:
        for rec, dt in chunk:
            report.records.append(rec)
            report.timings.append(dt)
            # a finder failure under the hypotheses also counts: the list is empty only if every such case succeeded
            if rec["hypotheses"] and (rec["oracle"] == "none" or rec["finder"] == "failure"):
                report.counterexamples.append(rec)
            if rec["agreement"] is False and "bundle" not in rec:
                rec["bundle"] = f"graph6: {rec['graph6']}\ntree: {rec['tree']}\nmode: {mode}\n"
    return report
