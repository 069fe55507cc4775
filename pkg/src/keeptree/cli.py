"""Command-line entry point: ``find``, ``verify``, ``oracle``, ``explore``, ``gen-trees``.

Exit status: 0 success or agreement, 1 failure / counterexample / rejected embedding,
2 usage or parse error. Timings go to stderr or ``--timings``; primary output is deterministic.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .connectivity import connectivity_predicate
from .graph import GraphError, min_degree, parse_graph, read_graph6_lines, remove_edges
from .oracle import enumerate_graphs_labeled, explore, oracle_find, random_near_regular
from .search import FailureDiagnostic, HypothesisWarning, find_removable_tree
from .trees import EmbeddingError, TreeError, embedding_from_edges, enumerate_trees, parse_tree

WORKERS_ENV = "KEEPTREE_WORKERS"
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    tree: str | None = None
    tree_embedding: str | None = None
    corpus: str | None = None
    labeled: str | None = None
    random_count: int | None = None
    mode: str = "vertex"
    k: int = 3
    m: str | None = None
    engine: str = "both"
    workers: int = 1
    out: str | None = None
    timings: str | None = None
    seed: int = DEFAULT_SEED
    count_all: bool = False
    max_steps: int | None = None

    def __post_init__(self):
        if self.mode not in ("vertex", "edge"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.k < 1:
            raise UsageError("k must be positive")
        if self.command == "find" and self.k != 3:
            raise UsageError("find only supports k = 3")
        if self.max_steps is not None and self.max_steps < 1:
            raise UsageError("--max-steps must be positive")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _load_graph(path: str | None):
    if path is None:
        raise UsageError("--graph is required")
    try:
        return parse_graph(_read(path))
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_tree(spec: str | None):
    if spec is None:
        raise UsageError("--tree is required")
    text = _read(spec) if Path(spec).is_file() else spec
    try:
        return parse_tree(text)
    except TreeError as exc:
        raise UsageError(f"{spec}: {exc}") from None


def _load_embedding_edges(path: str) -> list[tuple[int, int]]:
    edges = []
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"{path}:{lineno}: expected 'u v'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: non-integer vertex") from None
    return edges


def _verdict(mode: str) -> str:
    return "verified 3-connected" if mode == "vertex" else "verified 3-edge-connected"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _edges_text(edges) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(edges))


def cmd_find(cfg: RunConfig) -> int:
    G, T = _load_graph(cfg.graph), _load_tree(cfg.tree)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", HypothesisWarning)
        res = find_removable_tree(G, T, cfg.mode, max_steps=cfg.max_steps)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if isinstance(res, FailureDiagnostic):
        _emit(cfg, res.bundle())
        print(f"failure: {res.reason}", file=sys.stderr)
        return 1
    rest = remove_edges(G, res.image_edges)
    if not connectivity_predicate(cfg.mode, 3)(rest):
        print("internal error: result failed re-verification", file=sys.stderr)
        return 1
    _emit(cfg, _edges_text(res.image_edges) + f"# {_verdict(cfg.mode)}\n")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    G = _load_graph(cfg.graph)
    if cfg.tree_embedding is None:
        raise UsageError("--tree-embedding is required")
    edges = _load_embedding_edges(cfg.tree_embedding)
    T = _load_tree(cfg.tree) if cfg.tree else None
    try:
        emb = embedding_from_edges(G, edges, T)
    except (EmbeddingError, TreeError) as exc:
        _emit(cfg, f"rejected: {exc}\n")
        return 1
    if not connectivity_predicate(cfg.mode, cfg.k)(remove_edges(G, emb.image_edges)):
        kind = "connected" if cfg.mode == "vertex" else "edge-connected"
        _emit(cfg, f"rejected: G - E(T') is not {cfg.k}-{kind}\n")
        return 1
    _emit(cfg, f"accepted: {_verdict(cfg.mode)}\n")
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    G, T = _load_graph(cfg.graph), _load_tree(cfg.tree)
    found = oracle_find(G, T, cfg.mode, cfg.k)
    if found is None:
        _emit(cfg, "# no removable copy exists (exhaustive)\n")
        return 1
    kind = "connected" if cfg.mode == "vertex" else "edge-connected"
    _emit(cfg, _edges_text(found.image_edges) + f"# verified {cfg.k}-{kind}\n")
    return 0


def _parse_m(spec: str | None) -> list[int]:
    if not spec:
        raise UsageError("--m is required")
    out = []
    for part in spec.split(","):
        try:
            if "-" in part:
                a, b = part.split("-", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad --m value {spec!r}") from None
    if any(m < 1 for m in out):
        raise UsageError("tree orders must be positive")
    return out


def _corpus(cfg: RunConfig, m_values: list[int]):
    sources = [cfg.corpus is not None, cfg.labeled is not None, cfg.random_count is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --corpus, --labeled, --random")
    if cfg.corpus is not None:
        return cfg.corpus, list(read_graph6_lines(_read(cfg.corpus)))
    if cfg.labeled is not None:
        try:
            n, d = (int(x) for x in cfg.labeled.split(":"))
        except ValueError:
            raise UsageError("--labeled expects N:MIN_DEGREE") from None
        if n > 7:
            raise UsageError("--labeled supports n <= 7")
        return f"labeled n={n} min_deg={d}", list(enumerate(enumerate_graphs_labeled(n, d, cfg.k, cfg.mode)))
    rng = random.Random(cfg.seed)
    pred = connectivity_predicate(cfg.mode, cfg.k)
    lo_m = min(m_values)
    graphs = []
    while len(graphs) < cfg.random_count:
        n = rng.randint(max(12, lo_m + 7), 40)
        G = random_near_regular(n, cfg.k + lo_m - 1, cfg.k + lo_m + 2, rng)
        if pred(G) and min_degree(G) >= cfg.k + lo_m - 1:
            graphs.append((len(graphs), G))
    return f"random near-regular x{cfg.random_count} seed={cfg.seed}", graphs


def cmd_explore(cfg: RunConfig) -> int:
    m_values = _parse_m(cfg.m)
    name, corpus = _corpus(cfg, m_values)
    t0 = time.perf_counter()
    report = explore(corpus, m_values, cfg.k, cfg.mode, cfg.engine, cfg.workers, name=name,
                     count_all=cfg.count_all)
    elapsed = time.perf_counter() - t0
    _emit(cfg, report.to_jsonl())
    sys.stderr.write(report.summary())
    timing = f"elapsed {elapsed:.3f}s over {len(report.timings)} instances\n"
    if cfg.timings:
        Path(cfg.timings).write_text(timing + "".join(f"{t:.6f}\n" for t in report.timings))
    else:
        sys.stderr.write(timing)
    return 1 if report.counterexamples or report.disagreements else 0


def cmd_gen_trees(cfg: RunConfig) -> int:
    (m,) = _parse_m(cfg.m)[:1]
    _emit(cfg, "".join(T.to_parent_array() + "\n" for T in enumerate_trees(m)))
    return 0


COMMANDS = {"find": cmd_find, "verify": cmd_verify, "oracle": cmd_oracle, "explore": cmd_explore,
            "gen-trees": cmd_gen_trees}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="keeptree", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tree=True):
        sp.add_argument("--graph", help="graph6 or 'n m' edge-list file")
        if tree:
            sp.add_argument("--tree", help="parent array like '3 0 1', or a file")
        sp.add_argument("--mode", choices=("vertex", "edge"), default="vertex")
        sp.add_argument("--out", help="write primary output here instead of stdout")

    sp = sub.add_parser("find", help="construct a removable tree copy")
    common(sp)
    sp.add_argument("--max-steps", type=int, help="improvement step budget (default n^2)")
    sp = sub.add_parser("verify", help="check a given tree copy")
    common(sp)
    sp.add_argument("--tree-embedding", required=True, help="file of 'u v' lines")
    sp.add_argument("--k", type=int, default=3)
    sp = sub.add_parser("oracle", help="exhaustive search for a removable tree copy")
    common(sp)
    sp.add_argument("--k", type=int, default=3)
    sp = sub.add_parser("explore", help="run finder and/or oracle over a corpus")
    sp.add_argument("--corpus", help="graph6 file, one graph per line")
    sp.add_argument("--labeled", help="N:MIN_DEGREE, all labeled graphs (N <= 7)")
    sp.add_argument("--random", dest="random_count", type=int, help="number of random near-regular graphs")
    sp.add_argument("--m", required=True, help="tree orders, e.g. 3 or 3,4 or 3-8")
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--mode", choices=("vertex", "edge"), default="vertex")
    sp.add_argument("--engine", choices=("finder", "oracle", "both"), default="both")
    sp.add_argument("--workers", type=int, default=None, help=f"default from ${WORKERS_ENV} or 1")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--out", help="JSONL report path (default stdout)")
    sp.add_argument("--timings", help="write timings here instead of stderr")
    sp.add_argument("--count-all", action="store_true", help="oracle counts every removable copy")
    sp = sub.add_parser("gen-trees", help="list all trees of order m as parent arrays")
    sp.add_argument("--m", required=True)
    sp.add_argument("--out")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    workers = getattr(ns, "workers", None)
    if workers is None:
        try:
            workers = int(os.environ.get(WORKERS_ENV, "1"))
        except ValueError:
            raise UsageError(f"${WORKERS_ENV} must be an integer") from None
    return RunConfig(command=ns.command, graph=getattr(ns, "graph", None), tree=getattr(ns, "tree", None),
                     tree_embedding=getattr(ns, "tree_embedding", None), corpus=getattr(ns, "corpus", None),
                     labeled=getattr(ns, "labeled", None), random_count=getattr(ns, "random_count", None),
                     mode=getattr(ns, "mode", "vertex"), k=getattr(ns, "k", 3), m=getattr(ns, "m", None),
                     engine=getattr(ns, "engine", "both"), workers=max(1, workers), out=ns.out,
                     timings=getattr(ns, "timings", None), seed=getattr(ns, "seed", DEFAULT_SEED),
                     count_all=getattr(ns, "count_all", False), max_steps=getattr(ns, "max_steps", None))


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return run(_config(ns))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
