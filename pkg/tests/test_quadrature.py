import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teichpoisson.quadrature import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadratureError,
                                     SeedStream, gk15, integrate_boundary, integrate_disk,
                                     integrate_interval, mc_boundary, sample_boundary)
from teichpoisson.teich import I, TorusPoint
from teichpoisson.testfuncs import harmonic_family, indicator, harmonic_measure_interval

from .conftest import points


def test_rule_shapes():
    assert NODES.shape == KRONROD_WEIGHTS.shape == GAUSS_WEIGHTS.shape == (15,)
    assert math.fsum(KRONROD_WEIGHTS) == pytest.approx(2.0, abs=1e-15)
    assert math.fsum(GAUSS_WEIGHTS) == pytest.approx(2.0, abs=1e-15)
    assert np.all(np.diff(NODES) > 0)


@pytest.mark.parametrize("k", range(0, 23))
def test_kronrod_polynomial_exactness(k):
    exact = 0.0 if k % 2 else 2.0 / (k + 1)
    assert np.dot(KRONROD_WEIGHTS, NODES ** k) == pytest.approx(exact, abs=1e-14)
    if k <= 13:
        assert np.dot(GAUSS_WEIGHTS, NODES ** k) == pytest.approx(exact, abs=1e-14)


def test_gauss_not_exact_beyond_degree_13():
    assert abs(np.dot(GAUSS_WEIGHTS, NODES ** 14) - 2 / 15) > 1e-6


def test_gk15_error_estimate_shrinks():
    _, e1 = gk15(np.exp, 0.0, 1.0)
    _, e2 = gk15(lambda x: 1 / (1 + 25 * x * x), -1.0, 1.0)
    assert e1 < 1e-14 < e2


def test_interval_known_values():
    assert integrate_interval(np.sin, 0, math.pi, 1e-12).value == pytest.approx(2.0, abs=1e-12)
    r = integrate_interval(lambda x: 1 / np.sqrt(x), 0, 1, 1e-8)
    assert r.converged and r.value == pytest.approx(2.0, abs=1e-7)


def test_error_honesty_on_analytic_family():
    # true error <= 10 x reported estimate in at least 99% of cases
    cases = honest = 0
    for k in range(1, 41):
        a = 0.1 * k
        true = math.atan(a) / a
        for tol in (1e-4, 1e-6, 1e-8, 1e-10):
            r = integrate_interval(lambda x: 1 / (1 + (a * x) ** 2), 0, 1, tol)
            cases += 1
            honest += abs(r.value - true) <= 10 * max(r.error_estimate, 1e-16)
    assert honest / cases >= 0.99


def test_breakpoint_budget_for_jumps():
    f = lambda x: np.exp(np.sin(3 * x))  # noqa: E731
    smooth = integrate_interval(f, 0, 2, 1e-10)
    jump = integrate_interval(lambda x: f(x) * (x < 0.7), 0, 2, 1e-10, breakpoints=(0.7,))
    assert jump.converged
    assert jump.evaluations <= 2 * smooth.evaluations
    blind = integrate_interval(lambda x: f(x) * (x < 0.7), 0, 2, 1e-10)
    assert blind.evaluations > jump.evaluations


@settings(max_examples=50)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-5, 5), st.floats(-5, 5))
def test_linearity(alpha, beta, lo, width):
    a, b = lo, lo + abs(width) + 0.1
    f, g = np.cos, lambda x: np.exp(-x * x)
    tol = 1e-10
    lhs = integrate_interval(lambda x: alpha * f(x) + beta * g(x), a, b, tol).value
    rhs = (alpha * integrate_interval(f, a, b, tol).value
           + beta * integrate_interval(g, a, b, tol).value)
    assert abs(lhs - rhs) <= 2 * tol * max(1.0, abs(alpha) + abs(beta))


def test_nonconvergence_is_reported():
    r = integrate_interval(lambda x: np.sin(1 / x), 1e-6, 1, 1e-14, max_evals=300)
    assert not r.converged
    with pytest.raises(QuadratureError) as exc:
        r.require("oscillatory")
    assert exc.value.result is r


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        integrate_interval(np.sin, 0, 1, 0.0)


@given(points)
def test_boundary_harmonic_mean_value(x0):
    # the boundary measure at x0 reproduces harmonic functions at x0
    for V in harmonic_family(3, center=TorusPoint(0.5, 1.5)):
        r = integrate_boundary(V.trace, x0, 1e-11)
        assert r.converged
        assert abs(r.value - V.value(x0.z)) <= 1e-10


def test_boundary_indicator_with_breakpoints():
    x0 = TorusPoint(0.3, 0.2)
    V = indicator(-1.0, 0.5)
    r = integrate_boundary(V, x0, 1e-12, breakpoints=V.breakpoints)
    assert r.value == pytest.approx(harmonic_measure_interval(-1.0, 0.5, x0), abs=1e-12)


def test_disk_reference_integral():
    # int over the unit disk of 4 log(1/|z|) / (2 pi) dA = 1
    r = integrate_disk(lambda z: 4 * np.log(1 / np.abs(z)) / (2 * math.pi), I, 0.99999, 1e-6,
                       in_disk=True)
    assert r.converged
    assert abs(r.value - 1) <= r.error_estimate
    assert abs(r.value - 1) <= 1e-7


def test_disk_truncation_study():
    g = lambda z: 4 * np.log(1 / np.abs(z)) / (2 * math.pi)  # noqa: E731
    errs, tails = [], []
    for rc in (0.999, 0.9999):
        r = integrate_disk(g, I, rc, 1e-9, in_disk=True)
        errs.append(abs(1 - r.value))
        tails.append(r.tail)
    # integrand vanishes linearly at the rim, so the truncation error is quadratic
    assert errs[1] < errs[0] / 50
    assert all(t >= e for t, e in zip(tails, errs))


def test_disk_density_on_h_and_tail_honesty():
    # 2 / (pi (1 + |zeta|^2)^2) has total mass 1 on H and does not vanish at the rim
    g = lambda zeta: 2 / (math.pi * (1 + np.abs(zeta) ** 2) ** 2)  # noqa: E731
    strict = integrate_disk(g, TorusPoint(0.3, 1.2), 0.99999, 1e-6)
    assert not strict.converged
    assert abs(strict.value - 1) <= strict.error_estimate
    loose = integrate_disk(g, TorusPoint(0.3, 1.2), 0.99999, 1e-4)
    assert loose.converged and abs(loose.value - 1) <= 1e-4


def test_seed_stream_replay_and_independence():
    s = SeedStream(42, 3)
    assert np.array_equal(s.generator().random(5), SeedStream(42, 3).generator().random(5))
    assert not np.array_equal(s.generator().random(5), SeedStream(42, 4).generator().random(5))
    assert not np.array_equal(s.substream(0).generator().random(5),
                              s.substream(1).generator().random(5))
    assert np.array_equal(sample_boundary(I, 10, s), sample_boundary(I, 10, s))


def test_mc_agrees_with_quadrature():
    x0 = TorusPoint(-0.4, 0.8)
    for k, V in enumerate(harmonic_family(4)):
        mean, se = mc_boundary(V.trace, x0, 20_000, SeedStream(1, 500 + k))
        q = integrate_boundary(V.trace, x0, 1e-11).value
        assert abs(mean - q) <= 4 * se + 1e-15


def test_mc_clt_band():
    # across replications |mean - truth| <= 2 stderr about 95% of the time
    V = harmonic_family(2)[3]
    x0 = TorusPoint(0.2, 1.3)
    truth = V.value(x0.z)
    base = SeedStream(2, 600)
    inside = 0
    reps = 400
    for k in range(reps):
        mean, se = mc_boundary(V.trace, x0, 2000, base.substream(k))
        inside += abs(mean - truth) <= 2 * se
    assert 0.91 <= inside / reps <= 0.98


def test_mc_edge_cases():
    mean, se = mc_boundary(lambda u: np.ones_like(u), I, 1, SeedStream(0))
    assert mean == 1.0 and se == math.inf
    with pytest.raises(ValueError):
        mc_boundary(np.sin, I, 0, SeedStream(0))
