"""Registered test functions with analytic boundary traces, values and Laplacians.

All families are built from the Cayley map ``c_p(z) = (z - p) / (z - conj p)``,
which sends the base ``p`` to 0 and the boundary line onto the unit circle
(with ``c_p(inf) = 1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .teich import I, TorusPoint


@dataclass(frozen=True)
class BoundaryFunction:
    """A function on RP^1 given by a vectorized map on finite slopes.

    ``breakpoints`` lists the slopes where the function may be discontinuous.
    """

    fn: Callable
    at_infinity: complex | float = 0.0
    breakpoints: tuple[float, ...] = ()
    name: str = "V"

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        inf = np.isinf(u)
        if not inf.any():
            return self.fn(u)
        vals = np.asarray(self.fn(np.where(inf, 0.0, u)))
        return np.where(inf, self.at_infinity, vals)

    def is_continuous_at(self, u: float) -> bool:
        return all(u != b for b in self.breakpoints)


def cayley_map(p: complex):
    pc = complex(p).conjugate()
    return lambda z: (z - p) / (z - pc)


def cayley_derivative(p: complex):
    p = complex(p)
    return lambda z: (p - p.conjugate()) / (z - p.conjugate()) ** 2


@dataclass(frozen=True)
class HarmonicTest:
    name: str
    trace: BoundaryFunction
    value: Callable[[complex], complex | float]
    laplacian: Callable = field(default=lambda z: np.zeros_like(np.real(z)))


@dataclass(frozen=True)
class HolomorphicTest:
    name: str
    trace: BoundaryFunction
    value: Callable
    derivative: Callable


@dataclass(frozen=True)
class PSHTest:
    name: str
    trace: BoundaryFunction
    value: Callable
    laplacian: Callable


def holomorphic_power(n: int, center: TorusPoint = I) -> HolomorphicTest:
    """``c(z)^n`` for the Cayley map at ``center``."""
    c, dc = cayley_map(center.z), cayley_derivative(center.z)
    return HolomorphicTest(
        name=f"cayley^{n}",
        trace=BoundaryFunction(lambda u: c(u + 0j) ** n, at_infinity=1.0 + 0j, name=f"cayley^{n}"),
        value=lambda z: c(z) ** n,
        derivative=lambda z: n * c(z) ** (n - 1) * dc(z) if n else 0 * z,
    )


def antiholomorphic_power(n: int, center: TorusPoint = I) -> BoundaryFunction:
    c = cayley_map(center.z)
    return BoundaryFunction(lambda u: np.conj(c(u + 0j) ** n), at_infinity=1.0 + 0j,
                            name=f"conj(cayley^{n})")


def harmonic_family(n_max: int = 6, center: TorusPoint = I) -> list[HarmonicTest]:
    """Re and Im of ``c^n`` for ``n = 0..n_max`` (Im c^0 = 0 omitted)."""
    out = []
    for n in range(n_max + 1):
        h = holomorphic_power(n, center)
        for part, op in (("re", np.real), ("im", np.imag)):
            if n == 0 and part == "im":
                continue
            out.append(HarmonicTest(
                name=f"{part}(cayley^{n})",
                trace=BoundaryFunction(lambda u, h=h, op=op: op(h.trace.fn(u)),
                                       at_infinity=float(op(1.0 + 0j)), name=f"{part}(cayley^{n})"),
                value=lambda z, h=h, op=op: float(op(h.value(z))),
            ))
    return out


def psh_family(n_max: int = 3, center: TorusPoint = I) -> list[PSHTest]:
    """``|c|^(2n)``, subharmonic with Laplacian ``4 n^2 |c|^(2n-2) |c'|^2``."""
    c, dc = cayley_map(center.z), cayley_derivative(center.z)
    out = []
    for n in range(1, n_max + 1):
        out.append(PSHTest(
            name=f"|cayley|^{2 * n}",
            trace=BoundaryFunction(lambda u: np.ones_like(u), at_infinity=1.0, name=f"|cayley|^{2 * n}"),
            value=lambda z, n=n: abs(c(z)) ** (2 * n),
            laplacian=lambda z, n=n: 4 * n * n * np.abs(c(z)) ** (2 * n - 2) * np.abs(dc(z)) ** 2,
        ))
    return out


def indicator(a: float, b: float) -> BoundaryFunction:
    """Indicator of the open interval (a, b) of slopes."""
    return BoundaryFunction(lambda u: ((u > a) & (u < b)).astype(float), at_infinity=0.0,
                            breakpoints=(a, b), name=f"1({a},{b})")


def harmonic_measure_interval(a: float, b: float, x: TorusPoint) -> float:
    """Harmonic measure of (a, b) seen from ``x``: subtended angle over pi."""
    return (math.atan2(x.im, a - x.re) - math.atan2(x.im, b - x.re)) / math.pi


def smooth_schwarz_test() -> HarmonicTest:
    """``1 / (1 + u^2)``, the trace of ``Re(i / (z + i))``."""
    return HarmonicTest(
        name="1/(1+u^2)",
        trace=BoundaryFunction(lambda u: 1.0 / (1.0 + u * u), at_infinity=0.0, name="1/(1+u^2)"),
        value=lambda z: (1j / (z + 1j)).real,
    )


def constant(c: float | complex) -> BoundaryFunction:
    return BoundaryFunction(lambda u: np.full(np.shape(u), c), at_infinity=c, name=f"const({c})")


REGISTRY = {
    "one": lambda: constant(1.0),
    **{t.name: (lambda t=t: t.trace) for t in harmonic_family()},
    "smooth": lambda: smooth_schwarz_test().trace,
}


def lookup(name: str) -> BoundaryFunction:
    """Resolve a CLI name: a registry key, ``const:<c>`` or ``indicator:<a>,<b>``."""
    if name in REGISTRY:
        return REGISTRY[name]()
    if name.startswith("const:"):
        return constant(float(name.split(":", 1)[1]))
    if name.startswith("indicator:"):
        a, b = (float(s) for s in name.split(":", 1)[1].split(","))
        return indicator(a, b)
    raise KeyError(name)
