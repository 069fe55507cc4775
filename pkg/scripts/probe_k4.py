"""Probe k = 4 with the exhaustive oracle: 4-connected (or 4-edge-connected) labeled
graphs with minimum degree >= m + 3. Outcomes are reported, not interpreted."""
import argparse
import sys

from keeptree.oracle import enumerate_graphs_labeled, explore


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[6, 7])
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--mode", choices=("vertex", "edge"), default="vertex")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--count-all", action="store_true")
    args = ap.parse_args()
    for n in args.n:
        for m in args.m:
            d = m + 3
            if d >= n:
                continue
            corpus = list(enumerate_graphs_labeled(n, d, 4, args.mode))
            rep = explore(corpus, [m], 4, args.mode, "oracle", args.workers,
                          name=f"k=4 n={n} d>={d} {args.mode}", count_all=args.count_all)
            sys.stdout.write(rep.summary())
            if args.count_all and rep.records:
                low = min(r["count"] for r in rep.records)
                print(f"fewest removable copies on one instance: {low}")
            for r in rep.counterexamples:
                print("no removable copy:", r["graph6"], r["tree"])
            print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
