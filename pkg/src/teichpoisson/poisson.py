"""Poisson kernel, Busemann cocycle and the Poisson integral on T_{1,1}.

Conventions for quadratic differentials: an averaged ``dz^2`` coefficient is
returned as a complex number ``A`` meaning ``A dz^2`` on the flat torus at the
evaluation point.  ``derivative_average`` pairs the boundary data with
``q / ||q||`` and ``antiholomorphic_average`` with ``conj(q) / ||q||``; both
integrate against the boundary measure at the evaluation point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULTS
from .foliation import ProjectiveClass
from .quadrature import QuadratureError, integrate_boundary, integrate_disk, integrate_interval
from .teich import PUNCTURED_TORUS, TorusPoint, ext_slope, hm_unit_coeff
from .testfuncs import BoundaryFunction, PSHTest, cayley_map, psh_family
from .thurston import rebase_values

XI = PUNCTURED_TORUS.xi


@dataclass(frozen=True)
class KernelValue:
    value: float

    def __float__(self):
        return self.value


def kernel_values(x0: TorusPoint, x: TorusPoint, u):
    """``(Ext_x0(F_u) / Ext_x(F_u))^xi``, vectorized over slopes."""
    return rebase_values(x0, x, u) ** XI


def poisson_kernel(x0: TorusPoint, x: TorusPoint, u: ProjectiveClass) -> KernelValue:
    return KernelValue(float(kernel_values(x0, x, u.slope)))


def busemann_values(x0: TorusPoint, x: TorusPoint, u):
    return 0.5 * (np.log(ext_slope(x0.z, u)) - np.log(ext_slope(x.z, u)))


def busemann(x0: TorusPoint, x: TorusPoint, u: ProjectiveClass) -> float:
    """Cocycle ``(log Ext_x0(F_u) - log Ext_x(F_u)) / 2``.

    Oriented so that ``poisson_kernel(x0, x, u) = exp(2 xi * busemann(x0, x, u))``.
    """
    return float(busemann_values(x0, x, u.slope))


def _peak_hints(x: TorusPoint) -> tuple[float, ...]:
    # the integrand concentrates within Im x of Re x
    return (x.re - x.im, x.re, x.re + x.im)


def poisson_integral(V: BoundaryFunction, x0: TorusPoint, x: TorusPoint,
                     tol: float = DEFAULTS.boundary_tol):
    """``P[V](x)``: the integral of ``V * P(x0, x, .)`` against the measure at ``x0``.

    Raises ``QuadratureError`` (carrying the partial result) if the adaptive
    quadrature does not reach ``tol``.
    """
    def integrand(u):
        return V(u) * kernel_values(x0, x, u)

    res = integrate_boundary(integrand, x0, tol, breakpoints=(*V.breakpoints, *_peak_hints(x)))
    return res.require(f"Poisson integral of {V.name} at {x}").value


def schwarz_probe(V: BoundaryFunction, x0: TorusPoint, u0: float, heights,
                  tol: float = DEFAULTS.boundary_tol) -> list:
    """``P[V](u0 + i h)`` for each height ``h``."""
    return [poisson_integral(V, x0, TorusPoint(u0, h), tol) for h in heights]


def derivative_average(V: BoundaryFunction, x: TorusPoint,
                       tol: float = DEFAULTS.boundary_tol) -> complex:
    """``xi * int V q_{F,x} / ||q_{F,x}|| dmu^x`` as a dz^2 coefficient at ``x``.

    For ``V`` the trace of a holomorphic ``f`` this equals ``-2i f'(x)``.
    """
    res = integrate_boundary(lambda u: XI * V(u) * hm_unit_coeff(x.z, u), x,
                             tol, breakpoints=V.breakpoints)
    return complex(res.require("derivative average").value)


def antiholomorphic_average(V: BoundaryFunction, x: TorusPoint,
                            tol: float = DEFAULTS.boundary_tol) -> complex:
    """Same average with ``conj(q) / ||q||``; vanishes on holomorphic traces."""
    res = integrate_boundary(lambda u: XI * V(u) * np.conj(hm_unit_coeff(x.z, u)), x,
                             tol, breakpoints=V.breakpoints)
    return complex(res.require("antiholomorphic average").value)


def residue_integral(V: BoundaryFunction, x: TorusPoint,
                     tol: float = DEFAULTS.boundary_tol) -> complex:
    """``int_R V(u) (-1/pi) du / (u - x)^2`` over the real line.

    Independent of the measure/differential machinery: plain substitution
    ``u = Re x + Im x tan t``.
    """
    z = x.z

    def g(t):
        u = x.re + x.im * np.tan(t)
        return V(u) * (-1.0 / math.pi) * x.im / np.cos(t) ** 2 / (u - z) ** 2

    cuts = [math.atan((b - x.re) / x.im) for b in V.breakpoints if math.isfinite(b)]
    res = integrate_interval(g, -math.pi / 2, math.pi / 2, tol, cuts)
    return complex(res.require("residue integral").value)


DEFAULT_CR_GRID = tuple(TorusPoint(re, im) for re in (-1.0, 0.0, 1.0) for im in (0.5, 1.0, 2.0))


def cr_check(V: BoundaryFunction, grid=DEFAULT_CR_GRID, tol: float = 1e-10) -> float:
    """Max modulus over ``grid`` of the antiholomorphic average of ``V``."""
    return max(abs(antiholomorphic_average(V, x, tol)) for x in grid)


class GreenFormulaTerms(NamedTuple):
    lhs: float
    boundary: float
    bulk: float

    @property
    def residual(self) -> float:
        return self.boundary - self.bulk - self.lhs


def _bulk_raw(laplacian, x: TorusPoint, tol: float, radius_cut: float):
    cx = cayley_map(x.z)

    def g(zeta):
        return laplacian(zeta) * -np.log(np.abs(cx(zeta)))

    res = integrate_disk(g, x, radius_cut, tol)
    if not res.converged:
        raise QuadratureError(
            f"bulk integral did not converge: partial={res.value!r}, "
            f"error estimate={res.error_estimate:.3e} (tail {res.tail:.3e})", res)
    return float(np.real(res.value))


def calibrate_kappa(tol: float = 1e-8, radius_cut: float = DEFAULTS.disk_radius_cut) -> float:
    """Normalization making the bulk term of ``|c_x|^2`` at ``x`` equal to 1."""
    ref = psh_family(1, I_REF)[0]
    return 1.0 / _bulk_raw(ref.laplacian, I_REF, tol, radius_cut)


I_REF = TorusPoint(0.0, 1.0)


def green_formula_residual(V: PSHTest, x: TorusPoint, x0: TorusPoint,
                           tol: float = DEFAULTS.disk_tol,
                           kappa: float = DEFAULTS.green_kappa,
                           radius_cut: float = DEFAULTS.disk_radius_cut) -> GreenFormulaTerms:
    """Terms of ``V(x) = P[V](x) - kappa * int Delta V |g_x| dA``."""
    boundary = float(np.real(poisson_integral(V.trace, x0, x, min(tol, DEFAULTS.boundary_tol))))
    bulk = kappa * _bulk_raw(V.laplacian, x, tol, radius_cut)
    return GreenFormulaTerms(float(V.value(x.z)), boundary, bulk)
