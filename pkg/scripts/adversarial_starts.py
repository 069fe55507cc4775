"""Start the improvement loop from a deliberately bad tree copy (one that uses a
bridge between two joined cliques) and report which moves were needed."""
import argparse
import collections
import sys

from keeptree.connectivity import connectivity_predicate
from keeptree.graph import remove_edges
from keeptree.oracle import joined_cliques
from keeptree.search import run_search
from keeptree.trees import Embedding, enumerate_trees, extend_embedding


def bad_start(G, T, edge, pred):
    for a, b in T.edges:
        for u, v in (edge, edge[::-1]):
            emb = extend_embedding(G, Embedding.of(T, {a: u, b: v}), T)
            if emb is not None and not pred(remove_edges(G, emb.image_edges)):
                return emb
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[6, 7, 8, 9])
    args = ap.parse_args()
    failures = 0
    for mode in ("vertex", "edge"):
        pred = connectivity_predicate(mode, 3)
        moves = collections.Counter()
        runs = ok = 0
        for size in args.sizes:
            G = joined_cliques(size)
            for m in range(3, size - 2):
                for T in enumerate_trees(m):
                    start = bad_start(G, T, (0, size), pred)
                    if start is None:
                        continue
                    res = run_search(G, T, mode, initial=start)
                    runs += 1
                    ok += res.success
                    moves.update(s.move for s in res.state.trace)
                    if not res.success:
                        print(res.failure.bundle())
        failures += runs - ok
        print(f"{mode}: {ok}/{runs} recovered; moves {dict(sorted(moves.items()))}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
