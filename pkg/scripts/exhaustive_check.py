"""Exhaustive desk-scale check: all labeled graphs on 6 and 7 vertices with
minimum degree >= 5, every tree of order 3 (and order 4 on K7), both modes."""
import argparse
import sys

from keeptree.oracle import enumerate_graphs_labeled, explore


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="JSONL report prefix")
    args = ap.parse_args()
    status = 0
    for mode in ("vertex", "edge"):
        for n, d, ms in ((6, 5, [3]), (7, 5, [3]), (7, 6, [4])):
            corpus = list(enumerate_graphs_labeled(n, d, 3, mode))
            rep = explore(corpus, ms, 3, mode, "both", args.workers, name=f"labeled n={n} d>={d} {mode}")
            sys.stdout.write(rep.summary() + "\n")
            if args.out:
                with open(f"{args.out}.{mode}.n{n}d{d}.jsonl", "w") as fh:
                    fh.write(rep.to_jsonl())
            status |= bool(rep.counterexamples or rep.disagreements)
    return status


if __name__ == "__main__":
    sys.exit(main())
