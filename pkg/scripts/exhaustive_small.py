"""Census of every selfmap on n <= N points: how many satisfy the shrinking
condition, when the images stabilize, and how many trees hang off the fixed point.
Every shrinking map is also pushed through the full build/verify pipeline."""

import argparse
import itertools
from collections import Counter

from selfmap_compact import SelfmapSystem, build_witness, check_condition, verify_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()

    for n in range(1, args.max_n + 1):
        total = holds = rejected = 0
        stab, trees = Counter(), Counter()
        for table in itertools.product(range(n), repeat=n):
            total += 1
            s = SelfmapSystem.from_list(table)
            rep = check_condition(s)
            if not rep.holds:
                continue
            holds += 1
            stab[rep.stabilized_at] += 1
            w = build_witness(s)
            trees[len(w.classes)] += 1
            rejected += not verify_witness(s, w).passed
        cayley = "ok" if holds == n ** (n - 1) else "MISMATCH"
        print(f"n={n}: {total} maps, {holds} shrinking (n^(n-1) {cayley}), {rejected} rejected")
        print(f"   stabilized_at {dict(sorted(stab.items()))}")
        print(f"   trees at x*   {dict(sorted(trees.items()))}")


if __name__ == "__main__":
    main()
