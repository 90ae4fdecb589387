"""Disk-chart truncation study: actual error vs the tail estimate as the
radial cut approaches 1, for the reference integrand 4 log(1/|z|) / 2pi
(exact integral 1) and for the Green-weighted Laplacian of |c|^2 at i
(exact integral 2 pi)."""
import math

import numpy as np

from teichpoisson.poisson import I_REF
from teichpoisson.quadrature import integrate_disk
from teichpoisson.testfuncs import cayley_map, psh_family


def main():
    ref = lambda z: 4 * np.log(1 / np.abs(z)) / (2 * math.pi)  # noqa: E731
    lap = psh_family(1, I_REF)[0].laplacian
    c = cayley_map(I_REF.z)
    bulk = lambda zeta: lap(zeta) * -np.log(np.abs(c(zeta)))  # noqa: E731
    print(f"{'cut':>10} {'ref error':>12} {'ref tail':>12} {'bulk error':>12} {'bulk tail':>12}")
    for cut in (0.99, 0.999, 0.9999, 0.99999):
        r = integrate_disk(ref, I_REF, cut, 1e-10, in_disk=True)
        b = integrate_disk(bulk, I_REF, cut, 1e-10)
        print(f"{cut:10.5f} {1 - r.value:12.3e} {r.tail:12.3e} "
              f"{2 * math.pi - b.value:12.3e} {b.tail:12.3e}")


if __name__ == "__main__":
    main()
