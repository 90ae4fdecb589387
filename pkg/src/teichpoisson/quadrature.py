"""Integration engines.

* ``integrate_interval``: globally adaptive Gauss-Kronrod (G7/K15) bisection.
* ``integrate_boundary``: integrals against the boundary measure at a base
  point, compactified by ``u = Re x0 + Im x0 tan(theta)`` so the measure
  becomes ``dtheta / pi`` on (-pi/2, pi/2).  The K15 nodes are interior, so
  u = inf is never evaluated.
* ``integrate_disk``: integrals over H pulled back to the unit disk by the
  Moebius chart at a center, in polar coordinates.
* ``mc_boundary``: Monte Carlo with exact draws from the boundary measure.

Panel sums use ``math.fsum`` so results do not depend on summation order.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .teich import TorusPoint

# Kronrod 15-point nodes/weights on [-1, 1] (positive half, descending) and
# the embedded 7-point Gauss weights at the odd-indexed Kronrod nodes.
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

RNG_IDENTITY = "numpy.random.PCG64 seeded by SeedSequence(seed, spawn_key=(stream_id, *path))"


class QuadratureError(RuntimeError):
    """Raised by callers that require convergence; carries the partial result."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass
class QuadratureResult:
    value: complex | float
    error_estimate: float
    evaluations: int
    converged: bool
    tail: float = 0.0

    def require(self, what: str = "integral") -> "QuadratureResult":
        if not self.converged:
            raise QuadratureError(
                f"{what} did not converge: value={self.value!r}, "
                f"error estimate={self.error_estimate:.3e}, evaluations={self.evaluations}",
                self,
            )
        return self


@dataclass(frozen=True)
class SeedStream:
    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = field(default=())

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, k: int) -> "SeedStream":
        return SeedStream(self.seed, self.stream_id, (*self.path, k))


def _fsum(values) -> complex | float:
    values = list(values)
    if any(isinstance(v, complex) for v in values):
        return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    return math.fsum(values)


def _scalar(x):
    x = complex(x)
    return x.real if x.imag == 0 else x


def gk15(g, a: float, b: float):
    """Kronrod and Gauss estimates of the integral of vectorized ``g`` on [a, b]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(g(mid + half * NODES))
    k = half * np.dot(KRONROD_WEIGHTS, y)
    gauss = half * np.dot(GAUSS_WEIGHTS, y)
    return _scalar(k), float(abs(k - gauss))


def integrate_interval(g, a: float, b: float, tol: float = 1e-10,
                       breakpoints=(), max_evals: int = 200_000) -> QuadratureResult:
    """Globally adaptive G7/K15 integration of vectorized ``g`` over [a, b].

    The panel with the largest error estimate is bisected until the summed
    error estimate is below ``tol`` or ``max_evals`` is exhausted.
    ``breakpoints`` (known discontinuities) seed the initial partition.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    cuts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    heap = []
    evals = 0
    counter = 0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, err = gk15(g, lo, hi)
        evals += 15
        heapq.heappush(heap, (-err, counter, lo, hi, val))
        counter += 1
    while True:
        total_err = math.fsum(-h[0] for h in heap)
        if total_err <= tol or evals + 30 > max_evals:
            break
        neg_err, _, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            # panel can no longer be split in floating point
            heapq.heappush(heap, (neg_err, counter, lo, hi, _))
            break
        for l2, h2 in ((lo, mid), (mid, hi)):
            val, err = gk15(g, l2, h2)
            heapq.heappush(heap, (-err, counter, l2, h2, val))
            counter += 1
        evals += 30
    panels = sorted(heap, key=lambda h: h[2])
    value = _fsum(h[4] for h in panels)
    total_err = math.fsum(-h[0] for h in panels)
    return QuadratureResult(value, total_err, evals, total_err <= tol)


def _theta_of(u: float, x0: TorusPoint) -> float:
    return math.atan((u - x0.re) / x0.im)


def integrate_boundary(f, x0: TorusPoint, tol: float = 1e-10, breakpoints=(),
                       max_evals: int = 200_000) -> QuadratureResult:
    """Integral of vectorized ``f(u)`` against the boundary probability measure at ``x0``.

    ``breakpoints`` are slopes where ``f`` may jump; they are mapped into the
    angular chart and used as initial panel boundaries.
    """
    re, im = x0.re, x0.im

    def g(theta):
        return f(re + im * np.tan(theta)) / math.pi

    cuts = [_theta_of(u, x0) for u in breakpoints if math.isfinite(u)]
    return integrate_interval(g, -math.pi / 2, math.pi / 2, tol, cuts, max_evals)


def _disk_to_h(center: complex, z):
    return (center - z * np.conj(center)) / (1.0 - z)


def _periodic_mean(h, r: float, tol: float, n0: int = 32, nmax: int = 1 << 16):
    """Mean of ``h`` over the circle of radius ``r`` by trapezoid doubling."""
    n = n0
    ang = 2 * math.pi * np.arange(n) / n
    vals = np.asarray(h(r * np.exp(1j * ang)))
    total = vals.sum()
    est = total / n
    evals = n
    while n < nmax:
        ang = 2 * math.pi * (np.arange(n) + 0.5) / n
        total = total + np.asarray(h(r * np.exp(1j * ang))).sum()
        evals += n
        n *= 2
        new = total / n
        if abs(new - est) <= tol:
            return new, evals, True
        est = new
    return est, evals, False


def integrate_disk(g, center: TorusPoint, radius_cut: float = 0.9999, tol: float = 1e-8,
                   in_disk: bool = False) -> QuadratureResult:
    """Integral of ``g`` over H (area measure), computed in the disk chart at ``center``.

    ``g`` is vectorized over complex arrays.  With ``in_disk=False`` it is a
    density on H in the variable zeta and the Jacobian
    ``4 Im(center)^2 / |1 - z|^4`` is applied; with ``in_disk=True`` it is
    already a density on the disk in ``z``.

    Radially: adaptive G7/K15 on [0, radius_cut]; adaptive refinement absorbs
    the ``r log(1/r)`` endpoint behaviour of Green-weighted integrands (the
    reference integral of ``4 log(1/r) / 2pi`` is the regression gate).
    Angularly: trapezoid doubling, exponentially accurate for periodic data.
    The annulus ``radius_cut < r < 1`` is not integrated; ``tail`` estimates it
    as 1.5 x its width x the largest sampled circle integral of ``|g|`` there.
    """
    c = center.z
    jac_scale = 4.0 * center.im ** 2

    def disk_density(z):
        if in_disk:
            return g(z)
        return g(_disk_to_h(c, z)) * jac_scale / np.abs(1.0 - z) ** 4

    inner_tol = tol / 10.0
    inner_evals = 0
    inner_ok = True

    def radial(rs):
        nonlocal inner_evals, inner_ok
        out = []
        for r in np.atleast_1d(rs):
            mean, n, ok = _periodic_mean(disk_density, float(r), inner_tol / (2 * math.pi))
            inner_evals += n
            inner_ok &= ok
            out.append(2 * math.pi * r * mean)
        return np.array(out)

    res = integrate_interval(radial, 0.0, radius_cut, tol / 2, max_evals=20_000)

    ring = radius_cut + (1.0 - radius_cut) * np.array([0.0, 0.25, 0.5, 0.75, 0.9375])
    ang = 2 * math.pi * np.arange(512) / 512
    zs = ring[:, None] * np.exp(1j * ang[None, :])
    circle = 2 * math.pi * ring * np.mean(np.abs(disk_density(zs)), axis=1)
    tail = 1.5 * (1.0 - radius_cut) * float(np.max(circle))

    err = res.error_estimate + tail
    return QuadratureResult(res.value, err, inner_evals,
                            res.converged and inner_ok and err <= tol, tail=tail)


def sample_boundary(x0: TorusPoint, n: int, stream: SeedStream) -> np.ndarray:
    """Exact draws from the boundary measure at ``x0`` (a Cauchy law)."""
    if n <= 0:
        return np.empty(0)
    v = stream.generator().random(n)
    return x0.re + x0.im * np.tan(math.pi * (v - 0.5))


def mc_boundary(f, x0: TorusPoint, n: int, stream: SeedStream) -> tuple[complex | float, float]:
    """Monte Carlo mean of ``f`` under the boundary measure at ``x0`` and its standard error."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vals = np.asarray(f(sample_boundary(x0, n, stream)))
    mean = _scalar(vals.mean())
    if n == 1:
        return mean, math.inf
    stderr = float(np.sqrt(np.sum(np.abs(vals - vals.mean()) ** 2) / (n - 1) / n))
    return mean, stderr
