"""Pinned numerical settings shared by the library, the CLI and the tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .quadrature import RNG_IDENTITY


@dataclass(frozen=True)
class Defaults:
    # asymptotic KS critical value at alpha = 0.01 is 1.63 / sqrt(n)
    ks_coefficient: float = 1.63
    kerckhoff_grid: int = 4096
    kerckhoff_tol: float = 1e-12
    boundary_tol: float = 1e-10
    disk_radius_cut: float = 0.99999
    disk_tol: float = 1e-6
    # dd^c normalization of the Green-formula bulk term, frozen from the
    # |c|^2 calibration (see poisson.calibrate_kappa)
    green_kappa: float = 1.0 / (2.0 * math.pi)
    rng_identity: str = RNG_IDENTITY
    report_schema: int = 1


DEFAULTS = Defaults()
