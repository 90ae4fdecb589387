"""Convergence of the exponential pairing along rays to its boundary value.

For several slopes (rational and irrational) prints the distance between
exp(-2 (x | R(t))_y0) and the boundary pairing, as a function of t.
"""
import math

from teichpoisson.cli import ray_table
from teichpoisson.teich import I, TorusPoint

SLOPES = {"sqrt 2": math.sqrt(2.0), "golden": (1 + math.sqrt(5)) / 2, "1/3": 1 / 3, "-pi": -math.pi}


def main():
    ts = [0.5 * k for k in range(0, 41)]
    x = TorusPoint(1.0, 0.5)
    for name, u in SLOPES.items():
        rows = ray_table(ts, I, x, TorusPoint(-0.5, 2.0), u)
        first = next((t for t, _, _, d in rows if abs(d) <= 1e-12), None)
        print(f"slope {name:>7}: limit {rows[0][2]:.15f}; |diff| <= 1e-12 from t = {first}")
        for t, e, lim, d in rows[::4]:
            print(f"    t={t:5.1f}  pairing={e:.15f}  diff={d:+.3e}")


if __name__ == "__main__":
    main()
