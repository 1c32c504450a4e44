"""Feasibility radius of Linear N over a few signatures.

    python scripts/radius_table.py [--ns 2 5 17 64]
"""
import argparse

from ultrafinite.arith import ARITHMETIC, UNARY, Signature
from ultrafinite.fis import Linear, feasibility_radius, log_rescale


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 5, 17, 64])
    ap.add_argument("--bound", type=int, default=24, help="term length bound")
    args = ap.parse_args()

    sigs = {"unary": UNARY, "+": Signature.of("+"), "+,*": ARITHMETIC}
    for N in args.ns:
        for label, sig in sigs.items():
            for name, G in (("linear", Linear(N)), ("rescaled", log_rescale(Linear(N)))):
                r = feasibility_radius(G, sig, term_len_bound=args.bound)
                flag = " (horizon-limited)" if r.horizon_limited else ""
                print(f"N={N:<4} {label:<8} {name:<9} radius {r.radius}{flag}")


if __name__ == "__main__":
    main()
