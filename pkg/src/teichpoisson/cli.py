"""Command-line frontend: ``teichpoisson verify|eval|table|track``.

Exit codes: 0 pass, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from pathlib import Path

from . import poisson, teich, testfuncs, thurston, traintrack, verify
from .foliation import DomainError, MeasuredFoliation, ProjectiveClass
from .quadrature import QuadratureError
from .teich import I, TorusPoint

_NUMBER = re.compile(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?")


class InputError(ValueError):
    """Malformed user input; ``pos`` is a 0-based character offset."""

    def __init__(self, text: str, pos: int, what: str):
        self.text, self.pos = text, pos
        super().__init__(f"cannot parse {what} {text!r} at position {pos}\n"
                         f"  {text}\n  {' ' * pos}^")


def _term(s: str, pos: int, what: str) -> tuple[float, bool, int]:
    """One signed real or imaginary term starting at ``pos``."""
    sign = 1.0
    if pos < len(s) and s[pos] in "+-":
        sign = -1.0 if s[pos] == "-" else 1.0
        pos += 1
    m = _NUMBER.match(s, pos)
    if m:
        val, pos = float(m.group()), m.end()
    else:
        val = None
    if pos < len(s) and s[pos] in "ij":
        return sign * (1.0 if val is None else val), True, pos + 1
    if val is None:
        raise InputError(s, pos, what)
    return sign * val, False, pos


def parse_tau(text: str) -> TorusPoint:
    """Parse ``"i"``, ``"2i"``, ``"3+0.5i"``, ``"-1+2.5e-1i"`` into a point of H."""
    s = text.strip().replace(" ", "")
    if not s:
        raise InputError(text, 0, "point")
    parts = {False: 0.0, True: 0.0}
    seen = set()
    pos = 0
    while pos < len(s):
        start = pos
        if seen and s[pos] not in "+-":
            raise InputError(s, pos, "point")
        val, imag, pos = _term(s, pos, "point")
        if pos < len(s) and s[pos] not in "+-":
            raise InputError(s, pos, "point")
        if imag in seen:
            raise InputError(s, start, "point")
        seen.add(imag)
        parts[imag] = val
    if parts[True] <= 0:
        raise InputError(s, len(s) - 1, "point (imaginary part must be > 0)")
    return TorusPoint(parts[False], parts[True])


def parse_float(text: str, what: str = "number") -> float:
    s = text.strip()
    if s.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    m = re.fullmatch(r"[+-]?(?:" + _NUMBER.pattern + ")", s)
    if not m:
        pos = 0
        if s[:1] in "+-":
            pos = 1
        head = _NUMBER.match(s, pos)
        raise InputError(s, head.end() if head else pos, what)
    return float(s)


def parse_list(text: str, what: str = "list") -> list[float]:
    """Comma-separated floats, or an inclusive integer range ``a..b``."""
    s = text.strip()
    if not s:
        return []
    if ".." in s and "," not in s:
        lo, hi = s.split("..", 1)
        a, b = parse_float(lo, what), parse_float(hi, what)
        if a != int(a) or b != int(b):
            raise InputError(s, 0, f"{what} (range bounds must be integers)")
        return [float(k) for k in range(int(a), int(b) + 1)]
    out, off = [], 0
    for piece in s.split(","):
        try:
            out.append(parse_float(piece, what))
        except InputError as e:
            raise InputError(s, off + e.pos, what) from None
        off += len(piece) + 1
    return out


def parse_foliation(text: str) -> MeasuredFoliation:
    s = text.strip()
    pieces = s.split(",")
    if len(pieces) != 2:
        raise InputError(s, len(pieces[0]) if len(pieces) > 2 else len(s), "foliation a,b")
    try:
        a = parse_float(pieces[0], "foliation a,b")
    except InputError as e:
        raise InputError(s, e.pos, "foliation a,b") from None
    try:
        b = parse_float(pieces[1], "foliation a,b")
    except InputError as e:
        raise InputError(s, len(pieces[0]) + 1 + e.pos, "foliation a,b") from None
    return MeasuredFoliation(a, b)


def _fmt(v) -> str:
    if v is teich.NEG_INFINITY:
        return "-inf"
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else repr(v)
    return repr(float(v))


# -- commands -----------------------------------------------------------------

def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(" ".join(missing), 0, "required option(s)")


def cmd_eval(args) -> int:
    q = args.quantity
    x = parse_tau(args.x) if args.x is not None else None
    x0 = parse_tau(args.x0) if args.x0 is not None else None
    u = ProjectiveClass(parse_float(args.u, "slope")) if args.u is not None else None
    if q == "ext":
        _need(args, "x", "f")
        out = teich.extremal_length(x, parse_foliation(args.f))
    elif q in ("dist", "green"):
        _need(args, "x", "y")
        y = parse_tau(args.y)
        out = teich.teich_distance(x, y) if q == "dist" else teich.green(x, y)
    elif q in ("kernel", "busemann"):
        _need(args, "x0", "x", "u")
        out = (float(poisson.poisson_kernel(x0, x, u)) if q == "kernel"
               else poisson.busemann(x0, x, u))
    elif q == "density":
        _need(args, "x", "u")
        out = thurston.density(thurston.BoundaryMeasure(x), u)
    else:  # poisson-integral
        _need(args, "x", "v")
        try:
            V = testfuncs.lookup(args.v)
        except (KeyError, ValueError):
            raise InputError(args.v, 0, f"test function (known: {', '.join(testfuncs.REGISTRY)}, "
                                        "const:<c>, indicator:<a>,<b>)") from None
        out = poisson.poisson_integral(V, x0 or I, x, args.tol or 1e-10)
    print(_fmt(out))
    return 0


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def schwarz_table(heights, V=None, x0: TorusPoint = I, u0: float = 0.0, tol: float = 1e-12):
    V = V or testfuncs.smooth_schwarz_test().trace
    target = float(V(u0))
    vals = poisson.schwarz_probe(V, x0, u0, heights, tol)
    return [(h, float(v), target, abs(float(v) - target)) for h, v in zip(heights, vals)]


def ray_table(ts, y0: TorusPoint = I, x: TorusPoint = TorusPoint(1.0, 0.5),
              start: TorusPoint = I, u: float = math.sqrt(2.0)):
    pu = ProjectiveClass(u)
    lim = teich.boundary_pairing(y0, x, pu)
    rows = []
    for t in ts:
        e = teich.exp_pairing(y0, x, teich.teich_ray(start, pu, t))
        rows.append((t, e, lim, e - lim))
    return rows


def cmd_table(args) -> int:
    if args.scan == "schwarz":
        hs = parse_list(args.heights, "heights")
        if not hs:
            print("error: empty height list", file=sys.stderr)
            return 2
        if any(h <= 0 for h in hs):
            raise InputError(args.heights, 0, "heights (must be > 0)")
        V = testfuncs.lookup(args.v) if args.v else None
        rows = schwarz_table(hs, V, parse_tau(args.x0), parse_float(args.u0, "u0"))
        text = _csv(["h", "poisson_integral", "boundary_value", "gap"], rows)
    else:
        ts = parse_list(args.t, "t")
        if not ts:
            print("error: empty t list", file=sys.stderr)
            return 2
        if any(t < 0 for t in ts):
            raise InputError(args.t, 0, "t (must be >= 0)")
        rows = ray_table(ts, parse_tau(args.x0), parse_tau(args.x), parse_tau(args.start),
                         parse_float(args.u, "slope"))
        text = _csv(["t", "exp_pairing", "limit", "diff"], rows)
    _emit(text, args.output)
    return 0


def _emit(text: str, output: str | None):
    if output and output != "-":
        Path(output).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    cfg = verify.RunConfig(
        suite=args.suite,
        base=parse_tau(args.base),
        target=parse_tau(args.target) if args.target else None,
        tol=args.tol, n=args.n, seed=args.seed, output=args.output, fmt=args.format,
        timings=args.timings,
    )
    rep = verify.run_suite(args.suite, cfg)
    body = (verify.report_json(rep, cfg.timings) if cfg.fmt == "json"
            else verify.report_csv(rep, cfg.timings))
    if args.output == "-":
        sys.stdout.write(body)
    else:
        for line in verify.summary_lines(rep):
            print(line)
        print(f"{'PASS' if rep.passed else 'FAIL'}  suite {args.suite}: "
              f"{sum(r.passed for r in rep.records)}/{len(rep.records)} checks")
        if args.output:
            Path(args.output).write_text(body, newline="\n")
    return 0 if rep.passed else 1


def cmd_track(args) -> int:
    t = traintrack.load_track(args.file)
    d = traintrack.cone_dimension(t)
    print(f"branches {len(t.branches)}")
    print(f"switches {len(t.switches)}")
    print(f"cone_dimension {d}")
    print(f"expected {t.surface.real_dim if t.complete else 'n/a (not complete)'}")
    if t.complete:
        traintrack.check_complete(t)
    return 0


# -- parser -------------------------------------------------------------------

def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="teichpoisson", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=[*verify.SUITES, "all"])
    v.add_argument("--base", default="i")
    v.add_argument("--target")
    v.add_argument("--n", type=_positive_int)
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--tol", type=_positive_float)
    v.add_argument("--output", help="report path ('-' for stdout)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--timings", action="store_true", help="include runtimes in the report")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a single quantity")
    e.add_argument("quantity", choices=("ext", "dist", "green", "kernel", "busemann", "density",
                                        "poisson-integral"))
    for name in ("--x", "--y", "--x0", "--u", "--f", "--v"):
        e.add_argument(name)
    e.add_argument("--tol", type=_positive_float)
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("table", help="emit a 1-D scan as CSV")
    t.add_argument("scan", choices=("schwarz", "ray"))
    t.add_argument("--heights", default="1,0.1,0.01,0.001")
    t.add_argument("--v", help="boundary test function for the Schwarz scan")
    t.add_argument("--u0", default="0")
    t.add_argument("--t", default="1..20")
    t.add_argument("--x0", default="i")
    t.add_argument("--x", default="1+0.5i")
    t.add_argument("--start", default="i")
    t.add_argument("--u", default=repr(math.sqrt(2.0)))
    t.add_argument("--output")
    t.set_defaults(func=cmd_table)

    k = sub.add_parser("track", help="parse a train-track file and report its cone dimension")
    k.add_argument("file")
    k.set_defaults(func=cmd_track)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DomainError, traintrack.TrackParseError, traintrack.TrackValidationError,
            ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except QuadratureError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
