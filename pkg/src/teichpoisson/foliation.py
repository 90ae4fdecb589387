"""Measured foliations on the once-punctured torus and the SL(2, Z) action.

A measured foliation is a class ``[a, b]`` in R^2 modulo the rotation by pi.
The slope ``u = b / a`` is its projective class, a point of RP^1.  The
p/q-curve is the integral class ``[q, p]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class DomainError(ValueError):
    """Raised when an operation is called outside its domain."""


@dataclass(frozen=True)
class MeasuredFoliation:
    """The class ``[a, b]``, stored with ``a > 0`` or ``a == 0, b > 0``.

    ``[0, 0]`` is the zero foliation and is only reachable via ``ZERO``.
    """

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"non-finite weights ({a}, {b})")
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        # -0.0 would break structural equality
        object.__setattr__(self, "a", a + 0.0)
        object.__setattr__(self, "b", b + 0.0)

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def scale(self, t: float) -> "MeasuredFoliation":
        return MeasuredFoliation(t * self.a, t * self.b)

    def __rmul__(self, t: float) -> "MeasuredFoliation":
        return self.scale(t)

    @classmethod
    def from_slope(cls, u: "ProjectiveClass | float") -> "MeasuredFoliation":
        """Representative ``[1, u]`` (or ``[0, 1]`` for ``u = inf``)."""
        u = u.slope if isinstance(u, ProjectiveClass) else float(u)
        if math.isinf(u):
            return cls(0.0, 1.0)
        return cls(1.0, u)

    @classmethod
    def curve(cls, p: int, q: int) -> "MeasuredFoliation":
        """The simple closed curve of slope p/q, i.e. the class ``[q, p]``."""
        if math.gcd(p, q) != 1:
            raise DomainError(f"{p}/{q} is not in lowest terms")
        return cls(q, p)

    def projectivize(self) -> "ProjectiveClass":
        if self.is_zero:
            raise DomainError("the zero foliation has no projective class")
        return ProjectiveClass.from_weights(self.a, self.b)


ZERO = MeasuredFoliation(0.0, 0.0)


@dataclass(frozen=True, eq=False)
class ProjectiveClass:
    """A slope in R u {inf}.

    ``exact`` holds the slope as a Fraction for classes of weighted simple
    closed curves (rational slopes, with ``None`` for the point at infinity
    flagged by ``rational=True``).
    """

    slope: float
    rational: bool = False
    exact: Fraction | None = None

    __hash__ = None  # equality is tolerant, so no hash

    @classmethod
    def from_weights(cls, a: float, b: float) -> "ProjectiveClass":
        if a == 0 and b == 0:
            raise DomainError("the zero foliation has no projective class")
        if a == 0:
            return cls(math.inf)
        return cls(b / a)

    @classmethod
    def from_curve(cls, p: int, q: int) -> "ProjectiveClass":
        """Slope p/q of the p/q-curve; ``q = 0`` gives infinity."""
        if q == 0:
            return cls(math.inf, rational=True)
        frac = Fraction(p, q)
        return cls(float(frac), rational=True, exact=frac)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.slope)

    def theta(self) -> float:
        """Angle in [-pi/2, pi/2) with ``tan(theta) = slope``."""
        if self.is_infinite:
            return -math.pi / 2
        return math.atan(self.slope)

    def __eq__(self, other):
        if not isinstance(other, ProjectiveClass):
            return NotImplemented
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        return math.isclose(self.slope, other.slope, rel_tol=1e-14, abs_tol=1e-300)

    def __float__(self):
        return self.slope

    def __repr__(self):
        tag = f"{self.exact}" if self.exact is not None else repr(self.slope)
        return f"ProjectiveClass({tag})"


INFINITY = ProjectiveClass.from_curve(1, 0)


@dataclass(frozen=True)
class MappingClass:
    """An element ``(p, q; r, s)`` of SL(2, Z)."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise DomainError(f"entry {name}={v!r} is not an integer")
            object.__setattr__(self, name, int(v))
        if self.p * self.s - self.q * self.r != 1:
            raise DomainError(f"determinant of {self.matrix()} is not 1")

    @classmethod
    def identity(cls) -> "MappingClass":
        return cls(1, 0, 0, 1)

    def matrix(self) -> list[list[int]]:
        return [[self.p, self.q], [self.r, self.s]]

    def __matmul__(self, other: "MappingClass") -> "MappingClass":
        return MappingClass(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )

    def inverse(self) -> "MappingClass":
        return MappingClass(self.s, -self.q, -self.r, self.p)


def intersection(F: MeasuredFoliation, G: MeasuredFoliation) -> float:
    """Geometric intersection number ``|a p - b q|`` of ``[a, b]`` and ``[q, p]``."""
    return abs(F.a * G.b - F.b * G.a)


def mcg_apply(gamma: MappingClass, F: MeasuredFoliation) -> MeasuredFoliation:
    """Act on ``[a, b]`` by ``[s a + r b, q a + p b]``.

    This is the convention under which extremal length is equivariant with
    respect to the Moebius action on points, see ``mcg_apply_point``.
    """
    if F.is_zero:
        return F
    return MeasuredFoliation(gamma.s * F.a + gamma.r * F.b, gamma.q * F.a + gamma.p * F.b)


def mcg_apply_point(gamma: MappingClass, tau):
    """Moebius action ``(p tau + q) / (r tau + s)`` on the upper half-plane.

    Accepts a ``TorusPoint`` or a complex number / array and returns the same kind.
    """
    from .teich import TorusPoint

    if isinstance(tau, TorusPoint):
        return TorusPoint.from_complex(mcg_apply_point(gamma, tau.z))
    return (gamma.p * tau + gamma.q) / (gamma.r * tau + gamma.s)


def mcg_apply_slope(gamma: MappingClass, u: ProjectiveClass) -> ProjectiveClass:
    """Projectivized action; equals the Moebius map on the boundary line."""
    if u.exact is not None or (u.rational and u.is_infinite):
        num = gamma.p if u.is_infinite else gamma.p * u.exact + gamma.q
        den = gamma.r if u.is_infinite else gamma.r * u.exact + gamma.s
        frac = Fraction(num) / Fraction(den) if den != 0 else None
        if frac is None:
            return ProjectiveClass(math.inf, rational=True)
        return ProjectiveClass(float(frac), rational=True, exact=frac)
    return ProjectiveClass(float(mobius_slope(gamma, u.slope)))


def mobius_slope(gamma: MappingClass, u):
    """Vectorized slope action on floats with ``inf`` for the point at infinity."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.where(np.isinf(u), float(gamma.p), gamma.p * u + gamma.q)
        den = np.where(np.isinf(u), float(gamma.r), gamma.r * u + gamma.s)
        out = np.where(den == 0, np.inf, num / np.where(den == 0, 1.0, den))
    return out if out.ndim else float(out)
