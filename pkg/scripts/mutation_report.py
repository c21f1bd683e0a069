"""Tamper with witnesses of generated systems and tabulate which checker rules fire."""

import argparse
import random
import sys
from collections import Counter, defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from mutations import finite_mutants, random_ray, tail_tampers  # noqa: E402
from selfmap_compact import build_witness, verify_witness  # noqa: E402
from selfmap_compact.generate import GeneratorConfig, Shape, gen_system  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--systems", type=int, default=50)
    ap.add_argument("--rays", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    fired = defaultdict(Counter)
    missed = []
    for seed in range(args.systems):
        s = gen_system(GeneratorConfig(rng.randint(4, 60), seed, rng.choice(list(Shape))))
        for kind, rule, mutant in finite_mutants(s, build_witness(s), rng):
            rules = verify_witness(s, mutant).rules
            fired[kind.split()[0]][",".join(sorted(rules)) or "-"] += 1
            if rule not in rules:
                missed.append(kind)
    for _ in range(args.rays):
        ray = random_ray(rng)
        for kind, mutant in tail_tampers(build_witness(ray)):
            rules = verify_witness(ray, mutant).rules
            fired[kind.rsplit("-", 1)[0] if kind[-1].isdigit() else kind][",".join(sorted(rules)) or "-"] += 1
            if "e" not in rules:
                missed.append(kind)
    for kind in sorted(fired):
        print(f"{kind:<22} {dict(fired[kind])}")
    print(f"missed: {len(missed)}")
    return 1 if missed else 0


if __name__ == "__main__":
    raise SystemExit(main())
