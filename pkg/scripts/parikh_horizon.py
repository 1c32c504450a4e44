"""Credibility of F(n) across the scaled Parikh chain, and the merged proof at the horizon.

    python scripts/parikh_horizon.py [--step 1/1024] [--points 0 1 10 100 512 1023 1024]
"""
import argparse
from fractions import Fraction

from ultrafinite.arith import numeral
from ultrafinite.corpus import parikh_theory
from ultrafinite.families import parikh_chain
from ultrafinite.kernel import FromTTP, credibility, erosion_ttp
from ultrafinite.search import SearchBudget, feasible_consequence
from ultrafinite.syntax import Atom


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--step", type=Fraction, default=Fraction(1, 1024))
    ap.add_argument("--points", type=int, nargs="+", default=[0, 1, 10, 100, 512, 1023, 1024])
    args = ap.parse_args()

    th = parikh_theory()
    m = FromTTP(erosion_ttp(args.step))
    print(f"{'n':>6} {'search':>12} {'chain':>12}  status")
    for n in args.points:
        r = feasible_consequence(th, Atom("F", (numeral(n),)), m, SearchBudget(max_depth=n + 1))
        chain = credibility(m, parikh_chain(n, th), th)
        best = "-" if r.credibility is None else str(r.credibility)
        print(f"{n:>6} {best:>12} {str(chain):>12}  {r.status.value}")


if __name__ == "__main__":
    main()
