"""Normalize the seeded detour family and print the size sequence of each derivation.

    python scripts/normalize_family.py [--count 100] [--seed 20] [--show 10]
"""
import argparse
from collections import Counter

from ultrafinite.families import DETOUR_THEORY, detour_family
from ultrafinite.kernel import check_derivation, normalize_steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=20)
    ap.add_argument("--show", type=int, default=10)
    args = ap.parse_args()

    lengths = Counter()
    for i, d in enumerate(detour_family(args.count, seed=args.seed)):
        sizes = [s.size for s in normalize_steps(d)]
        assert all(b < a for a, b in zip(sizes, sizes[1:]))
        assert check_derivation(d, DETOUR_THEORY)
        lengths[len(sizes) - 1] += 1
        if i < args.show:
            print(f"{i:>3} {d.conclusion!s:<24} sizes {sizes}")
    print("rewrite steps -> derivations:", dict(sorted(lengths.items())))


if __name__ == "__main__":
    main()
