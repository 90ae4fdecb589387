"""Verification suites: each returns a list of check records for a RunConfig.

Every suite is deterministic for a fixed config; stochastic suites draw from
``SeedStream(cfg.seed, <suite stream id>)``.
"""
from __future__ import annotations

import csv
import functools
import io
import json
import math
import subprocess
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import poisson, teich, testfuncs, thurston, traintrack
from .config import DEFAULTS
from .foliation import MappingClass, MeasuredFoliation, mcg_apply, mcg_apply_point
from .quadrature import RNG_IDENTITY, QuadratureError, SeedStream
from .teich import I, TorusPoint


@dataclass
class RunConfig:
    command: str = "verify"
    suite: str = "all"
    base: TorusPoint = I
    target: TorusPoint | None = None
    tol: float | None = None
    n: int | None = None
    seed: int = 7
    output: str | None = None
    fmt: str = "json"
    timings: bool = False

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.n is not None and self.n < 1:
            raise ValueError("sample count must be >= 1")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["base"] = [self.base.re, self.base.im]
        d["target"] = None if self.target is None else [self.target.re, self.target.im]
        for k in ("output", "timings", "command", "fmt"):
            d.pop(k)
        return d


@dataclass
class CheckRecord:
    name: str
    anchor: str
    computed: float
    expected: float
    tolerance: float
    passed: bool
    runtime: float = 0.0
    detail: dict = field(default_factory=dict)


@dataclass
class Report:
    suite: str
    config: dict
    records: list[CheckRecord]
    schema: int = DEFAULTS.report_schema

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


@functools.lru_cache(maxsize=1)
def build_id() -> str:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).parent, capture_output=True, text=True,
                             timeout=5)
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def _rand_points(rng, n):
    re = rng.uniform(-3.0, 3.0, n)
    im = np.exp(rng.uniform(math.log(0.1), math.log(10.0), n))
    return re + 1j * im


def _rand_slopes(rng, n):
    return 3.0 * np.tan(math.pi * (rng.random(n) - 0.5))


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _record(name, anchor, computed, expected, tol, passed, runtime=0.0, **detail):
    return CheckRecord(name, anchor, float(computed), float(expected), float(tol),
                       bool(passed), runtime, detail)


# -- suites -----------------------------------------------------------------

def suite_kernel_transport(cfg: RunConfig) -> list[CheckRecord]:
    n = cfg.n or 100_000

    def run():
        rng = SeedStream(cfg.seed, 1).generator()
        x0, x, u = _rand_points(rng, n), _rand_points(rng, n), _rand_slopes(rng, n)
        P = teich.ext_slope(x0, u) / teich.ext_slope(x, u)
        rho0 = np.imag(x0) / (math.pi * np.abs(u - x0) ** 2)
        rho = np.imag(x) / (math.pi * np.abs(u - x) ** 2)
        return float(np.max(np.abs(P * rho0 / rho - 1.0)))

    err, dt = _timed(run)
    return [
        _record("kernel-transport max rel error", "PH measure is Thurston measure",
                err, 0.0, 1e-12, err <= 1e-12, dt, n=n),
        _record("kernel-transport runtime (s)", "PH measure is Thurston measure",
                dt, 0.0, 5.0, dt < 5.0, dt, budget=True),
    ]


def reproduction_grid() -> list[TorusPoint]:
    return [TorusPoint(re, im) for re in np.linspace(-2.0, 2.0, 5)
            for im in np.geomspace(0.25, 4.0, 5)]


def suite_poisson_reproduction(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tol or 1e-8

    def run():
        worst = 0.0
        for V in testfuncs.harmonic_family(6):
            for x in reproduction_grid():
                got = poisson.poisson_integral(V.trace, cfg.base, x, tol / 100)
                worst = max(worst, abs(got - V.value(x.z)))
        return worst

    worst, dt = _timed(run)
    return [
        _record("harmonic reproduction max error", "Poisson integral formula",
                worst, 0.0, tol, worst <= tol, dt),
        _record("harmonic reproduction runtime (s)", "Poisson integral formula",
                dt, 0.0, 60.0, dt < 60.0, dt, budget=True),
    ]


def suite_hm_constant(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tol or 1e-10
    out = []
    if cfg.target is not None:
        pairs = [(cfg.base, cfg.target)]
    else:
        rng = SeedStream(cfg.seed, 3).generator()
        n = cfg.n or 20
        pairs = list(zip(map(TorusPoint.from_complex, _rand_points(rng, n)),
                         map(TorusPoint.from_complex, _rand_points(rng, n))))
    for x0, x in pairs:
        res, dt = _timed(lambda: thurston.hm_volume_check(x0, x, tol / 100))
        out.append(_record(f"volume ratio at x0={x0.z}, x={x.z}", "Hubbard-Masur constant",
                           res.value, 1.0, tol, abs(res.value - 1.0) <= tol and res.converged, dt))
    return out


def suite_minsky(cfg: RunConfig) -> list[CheckRecord]:
    n = cfg.n or 100_000
    rng = SeedStream(cfg.seed, 4).generator()
    z = _rand_points(rng, n)
    a1, b1, a2, b2 = rng.normal(size=(4, n))
    inter = np.abs(a1 * b2 - b1 * a2)
    prod = teich.ext_weights(z, a1, b1) * teich.ext_weights(z, a2, b2)
    worst = float(np.max((inter ** 2 - prod) / prod))
    F, G = MeasuredFoliation(1, 0), MeasuredFoliation(0, 1)
    gap = abs(teich.extremal_length(I, F) * teich.extremal_length(I, G)
              - (F.a * G.b - F.b * G.a) ** 2)
    return [
        _record("Minsky max relative violation", "Minsky's inequality", worst, 0.0, 1e-12,
                worst <= 1e-12, n=n),
        _record("Minsky equality at tau=i, [1,0], [0,1]", "Minsky's inequality", gap, 0.0,
                1e-12, gap <= 1e-12),
    ]


def suite_kerckhoff(cfg: RunConfig) -> list[CheckRecord]:
    n = cfg.n or 10_000
    rng = SeedStream(cfg.seed, 5).generator()
    z1, z2 = _rand_points(rng, n), _rand_points(rng, n)

    def run():
        worst = 0.0
        for a, b in zip(z1, z2):
            t1, t2 = TorusPoint.from_complex(a), TorusPoint.from_complex(b)
            sup, _ = teich.kerckhoff_sup(t1, t2)
            worst = max(worst, abs(0.5 * math.log(sup) - teich.teich_distance(t1, t2)))
        return worst

    worst, dt = _timed(run)
    m = min(n, 200)
    drift = 0.0
    for a, b in zip(z1[:m], z2[:m]):
        t1, t2 = TorusPoint.from_complex(a), TorusPoint.from_complex(b)
        _, s1 = teich.kerckhoff_sup(t1, t2, grid=DEFAULTS.kerckhoff_grid)
        _, s2 = teich.kerckhoff_sup(t1, t2, grid=4 * DEFAULTS.kerckhoff_grid)
        dth = abs(s1.theta() - s2.theta()) % math.pi
        drift = max(drift, min(dth, math.pi - dth))
    return [
        _record("closed form vs Kerckhoff sup, max |diff|", "Kerckhoff formula", worst, 0.0,
                1e-9, worst <= 1e-9, dt, n=n),
        _record("maximizer angle drift under 4x grid refinement", "Kerckhoff formula", drift,
                0.0, 1e-6, drift <= 1e-6, n=m),
    ]


def suite_green(cfg: RunConfig) -> list[CheckRecord]:
    n = cfg.n or 10_000
    rng = SeedStream(cfg.seed, 6).generator()
    z1, z2 = _rand_points(rng, n), _rand_points(rng, n)
    g = teich.log_tanh(teich.distance_values(z1, z2))
    cay = np.log(np.abs((z2 - z1) / (z2 - np.conj(z1))))
    worst = float(np.max(np.abs(g - cay)))
    res = 0.0
    for tau in (TorusPoint(re, im) for re in (-1.0, 0.3, 2.0) for im in (0.5, 1.0, 3.0)):
        for F in (MeasuredFoliation(1, 0), MeasuredFoliation(0, 1), MeasuredFoliation(2, -3),
                  MeasuredFoliation(1, math.sqrt(2))):
            res = max(res, teich.harmonicity_residual(F, tau, 1e-3))
    return [
        _record("log tanh d_T vs log|cayley|, max |diff|", "the pluricomplex Green function",
                worst, 0.0, 1e-10, worst <= 1e-10, n=n),
        _record("harmonicity of -1/Ext, scaled 5-point residual (h=1e-3)",
                "homogeneous Monge-Ampere equation", res, 0.0, 1e-5, res <= 1e-5),
    ]


GREEN_FORMULA_POINTS = (TorusPoint(0.0, 1.0), TorusPoint(0.5, 1.5), TorusPoint(-1.0, 0.5),
                        TorusPoint(2.0, 3.0), TorusPoint(0.3, 0.2))


def suite_green_formula(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tol or 1e-4
    kappa = poisson.calibrate_kappa()
    rel = abs(kappa / DEFAULTS.green_kappa - 1)
    out = [_record("kappa calibration, relative error vs frozen 1/(2 pi)", "Green formula", rel,
                   0.0, 1e-8, rel <= 1e-8, kappa=kappa)]
    for V in testfuncs.psh_family(3):
        worst, dt = 0.0, 0.0
        for x in GREEN_FORMULA_POINTS:
            terms, t = _timed(lambda: poisson.green_formula_residual(
                V, x, cfg.base, tol=min(tol / 10, DEFAULTS.disk_tol)))
            dt += t
            worst = max(worst, abs(terms.residual))
        out.append(_record(f"|boundary - bulk - V(x)| for {V.name}", "Green formula",
                           worst, 0.0, tol, worst <= tol, dt))
    return out


SCHWARZ_HEIGHTS = (1.0, 0.1, 0.01, 0.001)


def suite_schwarz(cfg: RunConfig) -> list[CheckRecord]:
    V = testfuncs.smooth_schwarz_test()
    vals = poisson.schwarz_probe(V.trace, cfg.base, 0.0, SCHWARZ_HEIGHTS, cfg.tol or 1e-12)
    target = float(V.trace(np.array([0.0]))[0])
    gaps = [abs(v - target) for v in vals]
    mono = all(b < a for a, b in zip(gaps, gaps[1:]))
    return [
        _record("gap decreases monotonically over h", "Schwarz type theorem", float(mono), 1.0,
                0.0, mono, gaps=gaps),
        _record("final gap at h=1e-3", "Schwarz type theorem", gaps[-1], 0.0, 1e-3,
                gaps[-1] <= 1e-3),
    ]


def suite_derivative(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tol or 1e-8
    f = testfuncs.holomorphic_power(1)
    val = poisson.residue_integral(f.trace, I, tol / 100)
    avg = poisson.derivative_average(f.trace, I, tol / 100)
    return [
        _record("residue integral of cayley at i", "residue identity for the derivative", abs(val + 1), 0.0,
                tol, abs(val + 1) <= tol, value=[val.real, val.imag]),
        _record("derivative average vs residue integral", "derivative of the Poisson integral",
                abs(avg - val), 0.0, tol, abs(avg - val) <= tol),
    ]


def suite_cr(cfg: RunConfig) -> list[CheckRecord]:
    tol = cfg.tol or 1e-8
    hol = max(poisson.cr_check(testfuncs.holomorphic_power(k).trace, tol=tol / 100)
              for k in (1, 2, 3))
    anti = poisson.cr_check(testfuncs.antiholomorphic_power(1), tol=tol / 100)
    return [
        _record("CR average on holomorphic traces", "homogeneous tangential Cauchy-Riemann equation",
                hol, 0.0, tol, hol <= tol),
        _record("CR average on antiholomorphic trace (detected)",
                "homogeneous tangential Cauchy-Riemann equation", anti, 1e-2, 1e-2, anti >= 1e-2),
    ]


def sl2z_small(bound: int = 5) -> list[MappingClass]:
    r = range(-bound, bound + 1)
    return [MappingClass(p, q, rr, s) for p in r for q in r for rr in r for s in r
            if p * s - q * rr == 1]


def suite_mcg(cfg: RunConfig) -> list[CheckRecord]:
    n = cfg.n or 100_000
    group = sl2z_small(5)
    rng = SeedStream(cfg.seed, 10).generator()
    idx = rng.integers(0, len(group), n)
    M = np.array([[g.p, g.q, g.r, g.s] for g in group], dtype=float)[idx]
    p, q, r, s = M.T
    tau = _rand_points(rng, n)
    a, b = rng.normal(size=(2, n))
    gtau = (p * tau + q) / (r * tau + s)
    a2, b2 = s * a + r * b, q * a + p * b
    lhs = teich.ext_weights(gtau, a2, b2)
    rhs = teich.ext_weights(tau, a, b)
    eq = float(np.max(np.abs(lhs / rhs - 1)))
    # spot check the scalar API path agrees with the vectorized one
    g0 = group[int(idx[0])]
    F0 = MeasuredFoliation(a[0], b[0])
    t0 = TorusPoint.from_complex(tau[0])
    scalar = teich.extremal_length(mcg_apply_point(g0, t0), mcg_apply(g0, F0))
    eq = max(eq, abs(scalar / teich.extremal_length(t0, F0) - 1))
    out = [_record("Ext equivariance max rel error", "mapping class group equivariance", eq, 0.0,
                   1e-12, eq <= 1e-12, n=n)]
    pick = SeedStream(cfg.seed, 11).generator().choice(len(group), 10, replace=False)
    thr = thurston.ks_threshold(n)
    for k, j in enumerate(pick):
        g = group[int(j)]
        x = cfg.base
        ks = thurston.mcg_pushforward_check(g, x, n, cfg.seed, 100 + k)
        out.append(_record(f"pushforward KS for gamma={g.matrix()}",
                           "mapping class group pushforward of harmonic measure", ks, 0.0, thr,
                           ks < thr, n=n))
    return out


def suite_thurston_homogeneity(cfg: RunConfig) -> list[CheckRecord]:
    n = cfg.n or 1_000_000
    track = traintrack.torus_track()
    d = traintrack.check_complete(track)
    xi = track.surface.xi
    box = 2.0
    v1, e1 = traintrack.thurston_volume_estimate(
        track, lambda w: np.all(w <= 1.0, axis=1), n, SeedStream(cfg.seed, 20), box)
    v2, e2 = traintrack.thurston_volume_estimate(
        track, lambda w: np.all(w <= 2.0, axis=1), n, SeedStream(cfg.seed, 21), box)
    ratio = v2 / v1
    se = ratio * math.sqrt((e1 / v1) ** 2 + (e2 / v2) ** 2)
    expected = 2.0 ** (2 * xi)
    return [
        _record("torus track cone dimension", "measured foliations via train tracks", d, 2, 0,
                d == 2),
        _record("volume(2E)/volume(E)", "homogeneity of the Thurston measure", ratio, expected,
                3 * se, abs(ratio - expected) <= 3 * se, stderr=se, n=n),
    ]


SUITES = {
    "kernel-transport": suite_kernel_transport,
    "poisson-reproduction": suite_poisson_reproduction,
    "hm-constant": suite_hm_constant,
    "minsky": suite_minsky,
    "kerckhoff": suite_kerckhoff,
    "green": suite_green,
    "schwarz": suite_schwarz,
    "green-formula": suite_green_formula,
    "derivative": suite_derivative,
    "cr": suite_cr,
    "mcg": suite_mcg,
    "thurston-homogeneity": suite_thurston_homogeneity,
}
STOCHASTIC = ("kernel-transport", "hm-constant", "minsky", "kerckhoff", "green", "mcg",
              "thurston-homogeneity")


def run_suite(name: str, cfg: RunConfig) -> Report:
    """Run one suite (or ``all``); a quadrature failure becomes a failing record."""
    names = list(SUITES) if name == "all" else [name]
    records = []
    for s in names:
        try:
            records.extend(SUITES[s](cfg))
        except QuadratureError as e:
            res = e.result
            est = getattr(res, "error_estimate", math.inf)
            records.append(_record(f"{s}: quadrature did not converge", s, est, 0.0,
                                   cfg.tol or 0.0, False, message=str(e).splitlines()[0]))
    return Report(name, cfg.as_dict(), records)


# -- serialization ----------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _dump(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return _dump({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{_dump(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)}")


def report_json(rep: Report, timings: bool = False) -> str:
    recs = []
    for r in rep.records:
        d = asdict(r)
        if not timings:
            d.pop("runtime")
            if r.detail.get("budget"):
                # wall-clock measurements would break byte-identical replay
                d["computed"] = None
        recs.append(d)
    doc = {
        "schema": rep.schema,
        "build": build_id(),
        "rng": RNG_IDENTITY,
        "suite": rep.suite,
        "config": rep.config,
        "pass": rep.passed,
        "records": recs,
    }
    return _dump(doc) + "\n"


def report_csv(rep: Report, timings: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["name", "anchor", "computed", "expected", "tolerance", "pass"]
    w.writerow(cols + (["runtime"] if timings else []))
    for r in rep.records:
        computed = "" if r.detail.get("budget") and not timings else _fmt_float(r.computed)
        row = [r.name, r.anchor, computed, _fmt_float(r.expected),
               _fmt_float(r.tolerance), "true" if r.passed else "false"]
        w.writerow(row + ([format(r.runtime, ".6f")] if timings else []))
    return buf.getvalue()


def summary_lines(rep: Report) -> list[str]:
    return [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.computed:.6g} "
            f"(expected {r.expected:.6g}, tol {r.tolerance:.3g}) [{r.runtime:.2f}s]"
            for r in rep.records]
