"""Thurston probability measures on PMF = RP^1 for the punctured torus.

In the slope chart the measure at ``x`` is the Cauchy law
``(1/pi) Im x / |u - x|^2 du``.  Changing the base point multiplies the
density by the extremal-length ratio; the mapping class group pushes the
measure at ``x`` to the measure at ``gamma x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .foliation import MappingClass, ProjectiveClass, mcg_apply_point, mobius_slope
from .quadrature import QuadratureResult, SeedStream, integrate_boundary, sample_boundary
from .teich import TorusPoint, ext_slope


@dataclass(frozen=True)
class BoundaryMeasure:
    base: TorusPoint

    def density_values(self, u):
        """Vectorized density; ``u = inf`` gets 0 (a null point of the chart)."""
        u = np.asarray(u, dtype=float)
        inf = np.isinf(u)
        uu = np.where(inf, 0.0, u)
        val = self.base.im / (math.pi * np.abs(uu - self.base.z) ** 2)
        return np.where(inf, 0.0, val)

    def cdf(self, u):
        return 0.5 + np.arctan((np.asarray(u, dtype=float) - self.base.re) / self.base.im) / math.pi


def density(m: BoundaryMeasure, u: ProjectiveClass) -> float:
    return float(m.density_values(u.slope))


def rebase_values(x: TorusPoint, y: TorusPoint, u):
    """``Ext_x(F_u) / Ext_y(F_u)`` (xi = 1), vectorized over slopes."""
    return ext_slope(x.z, u) / ext_slope(y.z, u)


def rebase_density(x: TorusPoint, y: TorusPoint, u: ProjectiveClass) -> float:
    """Radon-Nikodym derivative of the measure at ``y`` with respect to the one at ``x``."""
    return float(rebase_values(x, y, u.slope))


def sample(m: BoundaryMeasure, n: int, seed: int, stream_id: int = 0) -> list[ProjectiveClass]:
    return [ProjectiveClass(float(u)) for u in sample_boundary(m.base, n, SeedStream(seed, stream_id))]


def ks_statistic(samples, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between samples and a CDF."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    F = cdf(xs)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_threshold(n: int) -> float:
    return DEFAULTS.ks_coefficient / math.sqrt(n)


def mcg_pushforward_check(gamma: MappingClass, x: TorusPoint, n: int, seed: int,
                          stream_id: int = 0) -> float:
    """KS distance between ``gamma_*`` of the measure at ``x`` and the measure at ``gamma x``."""
    if n < 1000:
        raise ValueError("n must be at least 1000")
    us = sample_boundary(x, n, SeedStream(seed, stream_id))
    image = mobius_slope(gamma, us)
    # +inf and -inf are the same point of RP^1; it has measure zero
    image = np.where(np.isinf(image), np.inf, image)
    target = BoundaryMeasure(mcg_apply_point(gamma, x))
    return ks_statistic(image, target.cdf)


def hm_volume_check(x0: TorusPoint, x: TorusPoint, tol: float = 1e-12) -> QuadratureResult:
    """Integral of ``Ext_x0 / Ext_x`` against the measure at ``x0``; equals 1."""
    return integrate_boundary(lambda u: rebase_values(x0, x, u), x0, tol)


def planar_lebesgue_rectangle(a0: float, a1: float, b0: float, b1: float, t: float = 1.0) -> float:
    """Lebesgue measure of ``t * ([a0, a1] x [b0, b1])`` in the ``[a, b]`` plane."""
    return abs((t * a1 - t * a0) * (t * b1 - t * b0))
