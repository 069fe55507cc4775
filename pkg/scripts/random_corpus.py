"""Random near-regular corpus: degrees in [m+2, m+5], n in [12, 40], kept only if
the graph meets the connectivity threshold. Runs the finder on every tree of order m."""
import argparse
import random
import sys
import time

from keeptree.connectivity import connectivity_predicate
from keeptree.oracle import explore, random_near_regular


def corpus(count, m, mode, rng):
    pred = connectivity_predicate(mode, 3)
    out = []
    while len(out) < count:
        G = random_near_regular(rng.randint(max(12, m + 6), 40), m + 2, m + 5, rng)
        if pred(G):
            out.append((len(out), G))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--per-order", type=int, default=84)
    ap.add_argument("--orders", default="3-8")
    ap.add_argument("--mode", choices=("vertex", "edge"), default="vertex")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    lo, _, hi = args.orders.partition("-")
    rng = random.Random(args.seed)
    bad = 0
    for m in range(int(lo), int(hi or lo) + 1):
        t0 = time.perf_counter()
        rep = explore(corpus(args.per_order, m, args.mode, rng), [m], 3, args.mode, "finder", args.workers,
                      name=f"random m={m} {args.mode}")
        sys.stdout.write(rep.summary())
        print(f"elapsed {time.perf_counter() - t0:.1f}s\n")
        for r in rep.counterexamples:
            print(r["bundle"])
        bad += len(rep.counterexamples)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
