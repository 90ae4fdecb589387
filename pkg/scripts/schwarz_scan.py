"""Boundary approach of the Poisson integral at a continuity point.

Prints the gap |P[V](u0 + ih) - V(u0)| for a smooth trace and for an interval
indicator over a geometric range of heights, with the ratio gap / h.
"""
import argparse

import numpy as np

from teichpoisson import testfuncs
from teichpoisson.cli import schwarz_table
from teichpoisson.teich import I


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--decades", type=int, default=6)
    args = ap.parse_args()
    hs = list(np.logspace(0, -args.decades, args.decades + 1))
    cases = {
        "smooth 1/(1+u^2)": testfuncs.smooth_schwarz_test().trace,
        "indicator (-1, 1)": testfuncs.indicator(-1.0, 1.0),
        "re(cayley^3)": testfuncs.lookup("re(cayley^3)"),
    }
    for name, V in cases.items():
        print(f"# {name}")
        print(f"{'h':>10} {'P[V](ih)':>22} {'gap':>12} {'gap/h':>10}")
        for h, val, _, gap in schwarz_table(hs, V, I, 0.0, 1e-13):
            print(f"{h:10.1e} {val:22.16f} {gap:12.3e} {gap / h:10.4f}")


if __name__ == "__main__":
    main()
