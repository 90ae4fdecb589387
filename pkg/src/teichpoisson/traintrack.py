"""Train tracks: switch conditions, transverse-measure cones and Lebesgue volume.

A track is an abstract graph: each branch has two ends, each end sits in the
incoming or outgoing slot of a switch.  A transverse measure is a nonnegative
weight per branch with incoming = outgoing at every switch; these form the
cone ``ker(M) n R^n_{>=0}`` where ``M`` is the switch matrix.

Completeness of a track is a fixture attribute, not checked topologically;
only its linear-algebra consequence (cone dimension 6g - 6 + 2m) is.

File format::

    traintrack <g> <m> [complete] [bigon]
    branch <id>
    ...
    switch in:<id>,<id>,... out:<id>,...
    ...

``#`` starts a comment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .quadrature import SeedStream
from .teich import SurfaceType


class TrackValidationError(ValueError):
    pass


class TrackParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConeSamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Switch:
    incoming: tuple[str, ...]
    outgoing: tuple[str, ...]


@dataclass(frozen=True)
class TrainTrackGraph:
    branches: tuple[str, ...]
    switches: tuple[Switch, ...]
    surface: SurfaceType
    complete: bool = False
    bigon_allowed: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.switches:
            raise TrackValidationError("track has no switches")
        if len(set(self.branches)) != len(self.branches):
            raise TrackValidationError("duplicate branch ids")
        ends = {b: 0 for b in self.branches}
        for k, sw in enumerate(self.switches):
            if not sw.incoming or not sw.outgoing:
                raise TrackValidationError(f"switch {k} has an empty side")
            for b in (*sw.incoming, *sw.outgoing):
                if b not in ends:
                    raise TrackValidationError(f"switch {k} uses unknown branch {b!r}")
                ends[b] += 1
        for b, n in ends.items():
            if n != 2:
                raise TrackValidationError(f"branch {b!r} has {n} end(s) at switches, expected 2")
        if not self._connected():
            raise TrackValidationError("track is disconnected; the surface must be connected")

    def _connected(self) -> bool:
        where: dict[str, list[int]] = {b: [] for b in self.branches}
        for k, sw in enumerate(self.switches):
            for b in (*sw.incoming, *sw.outgoing):
                where[b].append(k)
        seen, stack = {0}, [0]
        while stack:
            k = stack.pop()
            sw = self.switches[k]
            for b in (*sw.incoming, *sw.outgoing):
                for j in where[b]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
        return len(seen) == len(self.switches)

    def relabel(self, order) -> "TrainTrackGraph":
        """Same track with branches listed in ``order`` (a permutation of ids)."""
        return TrainTrackGraph(tuple(order), self.switches, self.surface,
                               self.complete, self.bigon_allowed)


@dataclass
class WeightVector:
    weights: dict[str, float | Fraction] = field(default_factory=dict)

    def array(self, track: TrainTrackGraph) -> np.ndarray:
        return np.array([float(self.weights[b]) for b in track.branches])


def switch_matrix(t: TrainTrackGraph) -> np.ndarray:
    """Rows are switches, columns branches: +1 incoming, -1 outgoing."""
    col = {b: j for j, b in enumerate(t.branches)}
    M = np.zeros((len(t.switches), len(t.branches)), dtype=np.int64)
    for i, sw in enumerate(t.switches):
        for b in sw.incoming:
            M[i, col[b]] += 1
        for b in sw.outgoing:
            M[i, col[b]] -= 1
    return M


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Exact reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(int(v)) for v in row] for row in np.asarray(M)]
    rows, cols = len(A), (len(A[0]) if A else 0)
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [v / piv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A[:r], pivots


def kernel_basis(t: TrainTrackGraph) -> tuple[list[list[Fraction]], list[int]]:
    """Exact kernel basis of the switch matrix, one vector per free branch.

    Vector ``k`` has weight 1 on free branch ``free[k]`` and 0 on the other
    free branches, so free-branch weights are the chart coordinates.
    """
    M = switch_matrix(t)
    R, pivots = rref(M)
    n = M.shape[1]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis, free


def cone_dimension(t: TrainTrackGraph) -> int:
    """Nullity of the switch matrix (exact rank)."""
    M = switch_matrix(t)
    return M.shape[1] - len(rref(M)[1])


def cone_dimension_svd(t: TrainTrackGraph) -> int:
    """Same quantity from the floating-point SVD rank; an independent cross-check."""
    M = switch_matrix(t).astype(float)
    return M.shape[1] - int(np.linalg.matrix_rank(M))


def check_complete(t: TrainTrackGraph) -> int:
    """For a track flagged complete, assert the cone has dimension 6g - 6 + 2m."""
    d = cone_dimension(t)
    if t.complete and d != t.surface.real_dim:
        raise TrackValidationError(
            f"complete track on (g, m) = ({t.surface.g}, {t.surface.m}) has cone "
            f"dimension {d}, expected {t.surface.real_dim}")
    return d


def switch_residuals(t: TrainTrackGraph, w: WeightVector) -> list:
    """Incoming minus outgoing weight per switch (exact for Fraction weights)."""
    return [sum(w.weights[b] for b in sw.incoming) - sum(w.weights[b] for b in sw.outgoing)
            for sw in t.switches]


def _basis_matrix(t: TrainTrackGraph) -> np.ndarray:
    basis, _ = kernel_basis(t)
    return np.array([[float(v) for v in vec] for vec in basis]).T


def _propose(t: TrainTrackGraph, box: float, n: int, stream: SeedStream) -> np.ndarray:
    K = _basis_matrix(t)
    c = box * stream.generator().random((n, K.shape[1]))
    return c @ K.T


def sample_cone(t: TrainTrackGraph, bound: float, n: int, stream: SeedStream,
                min_acceptance: float = 1e-3, batch: int = 65536) -> list[WeightVector]:
    """Uniform samples of the cone cut off by ``weights <= bound``.

    Rejection sampling from the box ``[0, bound]^d`` of free-branch weights,
    which contains the target region.
    """
    if cone_dimension(t) == 0:
        raise ConeSamplingError("degenerate cone")
    out: list[np.ndarray] = []
    tried = accepted = 0
    k = 0
    while accepted < n:
        w = _propose(t, bound, batch, stream.substream(k))
        k += 1
        ok = np.all((w >= 0) & (w <= bound), axis=1)
        tried += batch
        accepted += int(ok.sum())
        out.append(w[ok])
        if accepted / tried < min_acceptance:
            raise ConeSamplingError(
                f"acceptance rate {accepted / tried:.2e} below {min_acceptance:.0e}; "
                "use a tighter kernel basis")
    W = np.concatenate(out)[:n]
    return [WeightVector(dict(zip(t.branches, row))) for row in W]


def thurston_volume_estimate(t: TrainTrackGraph, predicate, n: int, stream: SeedStream,
                             box: float = 1.0) -> tuple[float, float]:
    """Monte Carlo Lebesgue volume (free-branch chart) of ``cone n {predicate}``.

    ``predicate`` maps an (n, branches) weight array to a boolean mask; the
    region must lie inside the box ``[0, box]^d`` of free-branch weights.
    """
    d = cone_dimension(t)
    w = _propose(t, box, n, stream)
    hit = np.all(w >= 0, axis=1) & np.asarray(predicate(w), dtype=bool)
    p = hit.mean()
    vol = box ** d
    return float(vol * p), float(vol * math.sqrt(p * (1 - p) / n))


def parse_track(text: str) -> TrainTrackGraph:
    header = None
    branches: list[str] = []
    branch_line: dict[str, int] = {}
    switches: list[Switch] = []
    seen_switch = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "traintrack" or len(tok) < 3:
                raise TrackParseError(lineno, "expected header 'traintrack g m'")
            try:
                g, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise TrackParseError(lineno, "g and m must be integers") from None
            flags = set(tok[3:])
            if flags - {"complete", "bigon"}:
                raise TrackParseError(lineno, f"unknown flags {sorted(flags - {'complete', 'bigon'})}")
            try:
                header = (SurfaceType(g, m), "complete" in flags, "bigon" in flags)
            except ValueError as e:
                raise TrackParseError(lineno, str(e)) from None
        elif tok[0] == "branch":
            if seen_switch:
                raise TrackParseError(lineno, "branch declared after switches")
            if len(tok) != 2:
                raise TrackParseError(lineno, "expected 'branch <id>'")
            if tok[1] in branch_line:
                raise TrackParseError(lineno, f"duplicate branch id {tok[1]!r} "
                                              f"(first on line {branch_line[tok[1]]})")
            branch_line[tok[1]] = lineno
            branches.append(tok[1])
        elif tok[0] == "switch":
            seen_switch = True
            sides = {}
            for part in tok[1:]:
                key, _, ids = part.partition(":")
                if key not in ("in", "out") or key in sides or not ids:
                    raise TrackParseError(lineno, f"bad switch field {part!r}")
                sides[key] = tuple(ids.split(","))
            if set(sides) != {"in", "out"}:
                raise TrackParseError(lineno, "switch needs both in: and out: fields")
            for b in (*sides["in"], *sides["out"]):
                if b not in branch_line:
                    raise TrackParseError(lineno, f"unknown branch {b!r}")
            switches.append(Switch(sides["in"], sides["out"]))
        else:
            raise TrackParseError(lineno, f"unexpected record {tok[0]!r}")
    if header is None:
        raise TrackParseError(1, "empty track file")
    ends = {b: 0 for b in branches}
    for sw in switches:
        for b in (*sw.incoming, *sw.outgoing):
            ends[b] += 1
    for b, n in ends.items():
        if n != 2:
            raise TrackParseError(branch_line[b], f"branch {b!r} has {n} end(s), expected 2")
    surface, complete, bigon = header
    return TrainTrackGraph(tuple(branches), tuple(switches), surface, complete, bigon)


def load_track(path) -> TrainTrackGraph:
    return parse_track(Path(path).read_text())


def dump_track(t: TrainTrackGraph) -> str:
    flags = (" complete" if t.complete else "") + (" bigon" if t.bigon_allowed else "")
    lines = [f"traintrack {t.surface.g} {t.surface.m}{flags}"]
    lines += [f"branch {b}" for b in t.branches]
    lines += [f"switch in:{','.join(s.incoming)} out:{','.join(s.outgoing)}" for s in t.switches]
    return "\n".join(lines) + "\n"


def torus_track() -> TrainTrackGraph:
    """Standard complete track on the punctured torus: branches a, b merge into c at both switches."""
    return TrainTrackGraph(
        branches=("a", "b", "c"),
        switches=(Switch(("c",), ("a", "b")), Switch(("a", "b"), ("c",))),
        surface=SurfaceType(1, 1),
        complete=True,
    )


def loop_track() -> TrainTrackGraph:
    """One switch, one branch leaving and re-entering it."""
    return TrainTrackGraph(("e",), (Switch(("e",), ("e",)),), SurfaceType(1, 1))
