"""Extremal-length geometry of the Teichmueller space T_{1,1} = upper half-plane.

A point ``tau`` is the flat torus C / (Z + Z tau).  All closed forms below are
for this model; the Kerckhoff supremum is also available as a brute-force
oracle for the distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .foliation import DomainError, MeasuredFoliation, ProjectiveClass, intersection

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SurfaceType:
    g: int
    m: int

    def __post_init__(self):
        if self.g < 0 or self.m < 0 or 2 * self.g - 2 + self.m <= 0:
            raise DomainError(f"(g, m) = ({self.g}, {self.m}) is not hyperbolic")

    @property
    def xi(self) -> int:
        """Complex dimension 3g - 3 + m of Teichmueller space."""
        return 3 * self.g - 3 + self.m

    @property
    def real_dim(self) -> int:
        return 6 * self.g - 6 + 2 * self.m


PUNCTURED_TORUS = SurfaceType(1, 1)


@dataclass(frozen=True)
class TorusPoint:
    re: float
    im: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))
        if not (self.im > 0 and math.isfinite(self.im) and math.isfinite(self.re)):
            raise DomainError(f"tau = {self.re} + {self.im}i is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z: complex) -> "TorusPoint":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __repr__(self):
        return f"TorusPoint({self.re!r}{self.im:+}i)"


I = TorusPoint(0.0, 1.0)


@dataclass(frozen=True)
class QuadraticDifferentialT:
    """``coeff * dz^2`` on the flat torus at ``basepoint``."""

    coeff: complex
    basepoint: TorusPoint

    @property
    def norm(self) -> float:
        # the flat torus C / (Z + Z tau) has area Im tau
        return abs(self.coeff) * self.basepoint.im


class _NegativeInfinity:
    """The value of the Green function on the diagonal.

    Deliberately not a float: arithmetic on it raises instead of silently
    propagating ``-inf``.  Use ``float(NEG_INFINITY)`` to opt in.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __float__(self):
        return -math.inf

    def __repr__(self):
        return "NEG_INFINITY"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self


NEG_INFINITY = _NegativeInfinity()


def ext_weights(z, a, b):
    """Extremal length ``|a z - b|^2 / Im z``; broadcasts over numpy arrays."""
    return np.abs(a * z - b) ** 2 / np.imag(z)


def ext_slope(z, u):
    """Extremal length of the representative ``[1, u]`` (``[0, 1]`` at u = inf)."""
    u = np.asarray(u, dtype=float)
    inf = np.isinf(u)
    finite = np.abs(z - np.where(inf, 0.0, u)) ** 2 / np.imag(z)
    return np.where(inf, 1.0 / np.imag(z), finite)


def extremal_length(tau: TorusPoint, F: MeasuredFoliation) -> float:
    if F.is_zero:
        raise DomainError("extremal length of the zero foliation")
    return float(ext_weights(tau.z, F.a, F.b))


def hubbard_masur(tau: TorusPoint, F: MeasuredFoliation) -> QuadraticDifferentialT:
    """The quadratic differential at ``tau`` whose vertical foliation is ``F``."""
    if F.is_zero:
        raise DomainError("Hubbard-Masur differential of the zero foliation")
    w = (-F.b + F.a * tau.z.conjugate()) / tau.im
    return QuadraticDifferentialT(-(w * w), tau)


def hm_unit_coeff(z, u):
    """``q_{F_u, z} / ||q_{F_u, z}||`` as a dz^2 coefficient, vectorized in ``u``."""
    u = np.asarray(u, dtype=float)
    inf = np.isinf(u)
    a = np.where(inf, 0.0, 1.0)
    b = np.where(inf, 1.0, u)
    w = (-b + a * np.conj(z)) / np.imag(z)
    return -(w * w) / (np.abs(w) ** 2 * np.imag(z))


def teich_distance(tau1: TorusPoint, tau2: TorusPoint, method: str = "closed") -> float:
    """Teichmueller distance.

    ``method="closed"`` uses half the hyperbolic distance of the curvature -1
    metric, in the cancellation-free form ``asinh(|t1 - t2| / (2 sqrt(Im t1 Im t2)))``.
    ``method="sup"`` evaluates the Kerckhoff supremum directly.
    """
    if method == "sup":
        sup, _ = kerckhoff_sup(tau1, tau2)
        return 0.5 * math.log(sup)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    return float(_dist(tau1.z, tau2.z))


def _dist(z1, z2):
    return np.arcsinh(np.abs(z1 - z2) / (2.0 * np.sqrt(np.imag(z1) * np.imag(z2))))


def distance_values(z1, z2):
    """Vectorized closed-form distance on complex arrays."""
    return _dist(z1, z2)


def _log_ratio_theta(z1: complex, z2: complex, theta):
    c, s = np.cos(theta), np.sin(theta)
    return (np.log(np.abs(z1 * c - s) ** 2 / z1.imag)
            - np.log(np.abs(z2 * c - s) ** 2 / z2.imag))


def kerckhoff_sup(tau1: TorusPoint, tau2: TorusPoint, grid: int = 4096,
                  tol: float = 1e-12) -> tuple[float, ProjectiveClass]:
    """Supremum over RP^1 of ``Ext_tau1(F) / Ext_tau2(F)`` and a maximizing slope.

    Grid search over ``F = [cos t, sin t]``, then golden-section refinement of
    the best cell down to width ``tol``.
    """
    z1, z2 = tau1.z, tau2.z
    if z1 == z2:
        return 1.0, ProjectiveClass(0.0)
    thetas = -math.pi / 2 + math.pi * np.arange(grid) / grid
    vals = _log_ratio_theta(z1, z2, thetas)
    k = int(np.argmax(vals))
    h = math.pi / grid
    lo, hi = thetas[k] - h, thetas[k] + h

    def f(t):
        return float(_log_ratio_theta(z1, z2, t))

    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    best = max(vals[k], fc, fd)
    theta = thetas[k] if best == vals[k] else (c if fc >= fd else d)
    theta = (theta + math.pi / 2) % math.pi - math.pi / 2
    slope = math.inf if theta == -math.pi / 2 else math.tan(theta)
    return math.exp(best), ProjectiveClass(slope)


def cayley(center: TorusPoint, tau: TorusPoint) -> complex:
    """Moebius map H -> unit disk sending ``center`` to 0, evaluated at ``tau``."""
    c = center.z
    return (tau.z - c) / (tau.z - c.conjugate())


def log_tanh(d):
    """``log tanh d``, accurate for both small and large ``d``."""
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore"):
        small = np.log(np.tanh(np.minimum(d, 0.5)))
        e = np.exp(-2.0 * np.maximum(d, 0.5))
        large = np.log1p(-e) - np.log1p(e)
    return np.where(d < 0.5, small, large)


def green(tau1: TorusPoint, tau2: TorusPoint):
    """Pluricomplex Green function ``log tanh d_T``; ``NEG_INFINITY`` on the diagonal."""
    if tau1.z == tau2.z:
        return NEG_INFINITY
    return float(log_tanh(teich_distance(tau1, tau2)))


def gromov_product(y0: TorusPoint, x: TorusPoint, y: TorusPoint) -> float:
    d = teich_distance
    return max(0.0, 0.5 * (d(y0, x) + d(y0, y) - d(x, y)))


def exp_pairing(y0: TorusPoint, x: TorusPoint, y: TorusPoint) -> float:
    return math.exp(-2.0 * gromov_product(y0, x, y))


def _ext_class(tau: TorusPoint, u: ProjectiveClass) -> float:
    return extremal_length(tau, MeasuredFoliation.from_slope(u))


def boundary_pairing(y0: TorusPoint, x: TorusPoint, u: ProjectiveClass) -> float:
    """Pairing of an interior point with a boundary slope, seen from ``y0``."""
    ratio = _ext_class(x, u) / _ext_class(y0, u)
    return math.exp(-teich_distance(y0, x)) * math.sqrt(ratio)


def boundary_pairing_bb(y0: TorusPoint, u: ProjectiveClass, w: ProjectiveClass) -> float:
    """Pairing of two boundary slopes, seen from ``y0``."""
    F, G = MeasuredFoliation.from_slope(u), MeasuredFoliation.from_slope(w)
    return intersection(F, G) / math.sqrt(extremal_length(y0, F) * extremal_length(y0, G))


def teich_ray(x: TorusPoint, u: ProjectiveClass, t: float) -> TorusPoint:
    """Unit-speed Teichmueller ray from ``x`` along which ``F_u`` shrinks.

    Conjugates ``u`` to infinity by ``w = -1 / (tau - u)``; there the ray is
    vertical with ``Im w`` growing like ``exp(2t)``.
    """
    if t < 0:
        raise DomainError(f"ray parameter t={t} < 0")
    if u.is_infinite:
        return TorusPoint(x.re, x.im * math.exp(2.0 * t))
    w = -1.0 / (x.z - u.slope)
    wt = complex(w.real, w.imag * math.exp(2.0 * t))
    return TorusPoint.from_complex(u.slope - 1.0 / wt)


def u_exhaustion(tau: TorusPoint, F: MeasuredFoliation) -> float:
    return -1.0 / extremal_length(tau, F)


def u_pair(tau: TorusPoint, G: MeasuredFoliation, H: MeasuredFoliation) -> float:
    if G.is_zero or H.is_zero or intersection(G, H) <= 0:
        raise DomainError("u_pair needs a transverse pair of nonzero foliations")
    return max(u_exhaustion(tau, G), u_exhaustion(tau, H))


def five_point_laplacian(f, tau: TorusPoint, h: float) -> float:
    """Central-difference Laplacian in (Re tau, Im tau)."""
    z = tau.z
    pts = [z + h, z - h, z + 1j * h, z - 1j * h]
    s = sum(f(TorusPoint.from_complex(p)) for p in pts) - 4.0 * f(tau)
    return s / (h * h)


def harmonicity_residual(F: MeasuredFoliation, tau: TorusPoint, h: float = 1e-3) -> float:
    """``|Delta_h u_F| * (Im tau)^2 / |u_F|``: dimensionless, O(h^2) for harmonic u_F."""
    lap = five_point_laplacian(lambda t: u_exhaustion(t, F), tau, h)
    return abs(lap) * tau.im ** 2 / abs(u_exhaustion(tau, F))

