import math
from fractions import Fraction

import numpy as np
import pytest

from teichpoisson.quadrature import SeedStream
from teichpoisson.teich import SurfaceType
from teichpoisson.traintrack import (ConeSamplingError, Switch, TrackParseError, TrainTrackGraph,
                                     TrackValidationError, WeightVector, check_complete,
                                     cone_dimension, cone_dimension_svd, dump_track,
                                     kernel_basis, load_track, loop_track, parse_track, rref,
                                     sample_cone, switch_matrix, switch_residuals,
                                     thurston_volume_estimate, torus_track)

TORUS_TEXT = """\
# standard track on the punctured torus
traintrack 1 1 complete
branch a
branch b
branch c
switch in:c out:a,b
switch in:a,b out:c
"""


def test_torus_fixture():
    t = torus_track()
    assert switch_matrix(t).tolist() == [[-1, -1, 1], [1, 1, -1]]
    assert cone_dimension(t) == cone_dimension_svd(t) == 2 == t.surface.real_dim
    assert check_complete(t) == 2


def test_loop_fixture_and_incomplete_flag():
    assert cone_dimension(loop_track()) == 1
    bad = TrainTrackGraph(("e",), (Switch(("e",), ("e",)),), SurfaceType(1, 1), complete=True)
    with pytest.raises(TrackValidationError):
        check_complete(bad)


def test_rref_exact():
    R, piv = rref([[2, 4, -2], [1, 3, 0]])
    assert piv == [0, 1]
    assert R == [[1, 0, -3], [0, 1, 1]]
    assert all(isinstance(v, Fraction) for row in R for v in row)


def test_kernel_basis_satisfies_switch_conditions_exactly():
    t = torus_track()
    basis, free = kernel_basis(t)
    assert len(basis) == len(free) == 2
    for vec in basis:
        w = WeightVector(dict(zip(t.branches, vec)))
        assert switch_residuals(t, w) == [0, 0]
    # free-branch weights are the chart coordinates
    for k, f in enumerate(free):
        assert [basis[j][f] for j in range(len(basis))] == [int(j == k) for j in range(len(basis))]


def test_parse_roundtrip():
    t = parse_track(TORUS_TEXT)
    assert t == torus_track()
    assert parse_track(dump_track(t)) == t


def test_load_track(tmp_path):
    p = tmp_path / "torus.tt"
    p.write_text(TORUS_TEXT)
    assert cone_dimension(load_track(p)) == 2


@pytest.mark.parametrize("text, lineno, fragment", [
    ("", 1, "empty"),
    ("tracks 1 1\n", 1, "header"),
    ("traintrack one 1\n", 1, "integers"),
    ("traintrack 1 1 shiny\n", 1, "unknown flags"),
    ("traintrack 1 1\nbranch a\nbranch a\n", 3, "duplicate"),
    ("traintrack 1 1\nbranch a\nswitch in:a out:b\n", 3, "unknown branch"),
    ("traintrack 1 1\nbranch a\nbranch b\nswitch in:a out:a\n", 3, "0 end"),
    ("traintrack 1 1\nbranch a\nswitch in:a\n", 3, "both"),
    ("traintrack 1 1\nbranch a\nswitch in:a out:a\nbranch b\n", 4, "after switches"),
    ("traintrack 1 1\nbranch a\nwire a\n", 3, "unexpected"),
    ("traintrack 1 1\nbranch a\nswitch in:a in:a out:a\n", 3, "bad switch field"),
])
def test_parse_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(TrackParseError) as exc:
        parse_track(text)
    assert exc.value.lineno == lineno
    assert fragment in str(exc.value)


def test_validation_errors():
    S = SurfaceType(1, 1)
    with pytest.raises(TrackValidationError):
        TrainTrackGraph(("a",), (), S)
    with pytest.raises(TrackValidationError):
        TrainTrackGraph(("a",), (Switch((), ("a", "a")),), S)
    with pytest.raises(TrackValidationError, match="disconnected"):
        TrainTrackGraph(("a", "b"), (Switch(("a",), ("a",)), Switch(("b",), ("b",))), S)


def test_relabel_invariance():
    t = torus_track()
    for order in (("c", "a", "b"), ("b", "c", "a")):
        r = t.relabel(order)
        assert cone_dimension(r) == cone_dimension(t)
        basis, _ = kernel_basis(r)
        for vec in basis:
            assert switch_residuals(r, WeightVector(dict(zip(r.branches, vec)))) == [0, 0]


def _random_track(rng, n_branches, n_switches):
    ends = [b for b in range(n_branches) for _ in range(2)]
    rng.shuffle(ends)
    slots = [([], []) for _ in range(n_switches)]
    for k, b in enumerate(ends):
        s = k % n_switches if k < 2 * n_switches else int(rng.integers(n_switches))
        side = k // n_switches % 2 if k < 2 * n_switches else int(rng.integers(2))
        slots[s][side].append(f"b{b}")
    switches = tuple(Switch(tuple(i), tuple(o)) for i, o in slots)
    return TrainTrackGraph(tuple(f"b{b}" for b in range(n_branches)), switches, SurfaceType(1, 1))


def test_random_graphs_exact_and_float_rank_agree():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 60:
        nb = int(rng.integers(2, 12))
        ns = int(rng.integers(1, max(2, nb)))
        try:
            t = _random_track(rng, nb, ns)
        except TrackValidationError:
            continue
        assert cone_dimension(t) == cone_dimension_svd(t)
        basis, _ = kernel_basis(t)
        M = switch_matrix(t)
        for vec in basis:
            assert all(sum(Fraction(int(m)) * v for m, v in zip(row, vec)) == 0 for row in M)
        checked += 1


def test_sample_cone_respects_constraints_and_replays():
    t = torus_track()
    ws = sample_cone(t, 1.0, 500, SeedStream(3, 0))
    assert len(ws) == 500
    for w in ws[:50]:
        arr = w.array(t)
        assert np.all(arr >= 0) and np.all(arr <= 1.0)
        assert max(abs(float(r)) for r in switch_residuals(t, w)) < 1e-12
    again = sample_cone(t, 1.0, 500, SeedStream(3, 0))
    assert [w.weights for w in ws] == [w.weights for w in again]


def test_sample_cone_acceptance_guard():
    with pytest.raises(ConeSamplingError):
        sample_cone(torus_track(), 1.0, 100, SeedStream(0), min_acceptance=0.99)


def test_volume_estimate_matches_exact_area():
    # in the (b, c) chart the region {a, b, c <= 1} is {0 <= b <= c <= 1}: area 1/2
    vol, se = thurston_volume_estimate(torus_track(), lambda w: np.all(w <= 1, axis=1),
                                       200_000, SeedStream(9, 0), box=1.0)
    assert abs(vol - 0.5) <= 4 * se


def test_homogeneity_regression_exponent():
    t = torus_track()
    scales = np.array([0.5, 1.0, 1.5, 2.0])
    vols = [thurston_volume_estimate(t, lambda w, s=s: np.all(w <= s, axis=1), 200_000,
                                     SeedStream(13, k), box=2.0)[0]
            for k, s in enumerate(scales)]
    slope = np.polyfit(np.log(scales), np.log(vols), 1)[0]
    assert abs(slope - 2 * t.surface.xi) <= 0.05
