"""Generate a corpus of shrinking systems, build and verify a witness for each,
and print per-shape timing and size statistics."""

import argparse
import random
import statistics
import time

from selfmap_compact import build_witness, verify_witness
from selfmap_compact.generate import GeneratorConfig, Shape, gen_system


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=3000, help="systems per shape")
    ap.add_argument("--max-size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--shuffle-orders", type=int, default=None, metavar="SEED")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'shape':<10} {'n':>6} {'rejected':>8} {'classes':>8} {'depth':>6} {'atoms/lvl':>9} {'ms/sys':>7}")
    for shape in Shape:
        classes, depths, atoms, rejected = [], [], [], 0
        t0 = time.perf_counter()
        for _ in range(args.count):
            s = gen_system(GeneratorConfig(rng.randint(1, args.max_size), rng.getrandbits(64), shape))
            w = build_witness(s, args.shuffle_orders)
            rejected += not verify_witness(s, w).passed
            classes.append(len(w.classes))
            for cls in w.classes:
                depths.append(len(cls.chain.chain))
                atoms.extend(len(row) for row in cls.chain.orders)
        dt = time.perf_counter() - t0
        print(
            f"{shape.value:<10} {args.count:>6} {rejected:>8} {statistics.mean(classes):>8.2f} "
            f"{statistics.mean(depths or [0]):>6.2f} {statistics.mean(atoms or [0]):>9.2f} "
            f"{1000 * dt / args.count:>7.2f}"
        )


if __name__ == "__main__":
    main()
