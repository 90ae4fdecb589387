import json
import math

import pytest

from teichpoisson.cli import InputError, main, parse_foliation, parse_list, parse_tau
from teichpoisson.teich import TorusPoint
from teichpoisson.traintrack import dump_track, torus_track


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("text, expected", [
    ("i", TorusPoint(0, 1)), ("2i", TorusPoint(0, 2)), ("3+0.5i", TorusPoint(3, 0.5)),
    ("-1+2.5e-1i", TorusPoint(-1, 0.25)), ("0.5i+2", TorusPoint(2, 0.5)), (" 1 + i ", TorusPoint(1, 1)),
])
def test_parse_tau(text, expected):
    assert parse_tau(text) == expected


@pytest.mark.parametrize("text, pos", [("3+0.5q", 5), ("2", 0), ("1+2", 1), ("--i", 1), ("", 0),
                                       ("i+i", 1)])
def test_parse_tau_errors_report_position(text, pos):
    with pytest.raises(InputError) as exc:
        parse_tau(text)
    assert exc.value.pos == pos


def test_parse_foliation_and_lists():
    f = parse_foliation("1,-2.5")
    assert (f.a, f.b) == (1.0, -2.5)
    with pytest.raises(InputError) as exc:
        parse_foliation("1,x2")
    assert exc.value.pos == 2
    assert parse_list("1..3") == [1.0, 2.0, 3.0]
    assert parse_list("1,0.1") == [1.0, 0.1]
    assert parse_list("") == []
    with pytest.raises(InputError) as exc:
        parse_list("1,0.1,abc")
    assert exc.value.pos == 6


@pytest.mark.parametrize("argv, expected", [
    (("eval", "kernel", "--x0", "i", "--x", "2i", "--u", "0"), "0.5"),
    (("eval", "dist", "--x", "i", "--y", "2i"), "0.34657359027997264"),
    (("eval", "ext", "--x", "i", "--f", "1,0"), "1.0"),
    (("eval", "green", "--x", "i", "--y", "i"), "-inf"),
    (("eval", "busemann", "--x0", "i", "--x", "2i", "--u", "inf"), repr(0.5 * math.log(2))),
    (("eval", "density", "--x", "i", "--u", "0"), repr(1 / math.pi)),
])
def test_eval_examples(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


def test_eval_poisson_integral(capsys):
    code, out, _ = run(capsys, "eval", "poisson-integral", "--x", "1+0.5i", "--v", "smooth")
    assert code == 0
    assert float(out) == pytest.approx((1j / (1 + 0.5j + 1j)).real, abs=1e-10)


@pytest.mark.parametrize("argv", [
    ("eval", "ext", "--x", "3+0.5q", "--f", "1,0"),
    ("eval", "ext", "--x", "i", "--f", "1"),
    ("eval", "ext", "--x", "i"),
    ("eval", "poisson-integral", "--x", "i", "--v", "nope"),
    ("eval", "dist", "--x", "1-i", "--y", "i"),
])
def test_eval_malformed_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_eval_unknown_quantity_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "volume"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_eval_error_shows_position(capsys):
    code, _, err = run(capsys, "eval", "ext", "--x", "3+0.5q", "--f", "1,0")
    assert code == 2
    assert "position 5" in err


def test_verify_unknown_suite_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2
    assert "kernel-transport" in capsys.readouterr().err


def test_verify_hm_constant_example(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "hm-constant", "--base", "i", "--target", "2i",
                       "--output", str(out_path))
    assert code == 0
    assert out.startswith("PASS")
    doc = json.loads(out_path.read_text())
    assert doc["pass"] is True and doc["schema"] == 1
    rec = doc["records"][0]
    assert abs(rec["computed"] - 1) <= 1e-10
    assert rec["anchor"] == "Hubbard-Masur constant"
    assert "runtime" not in rec


def test_verify_kernel_transport_example(capsys):
    code, out, _ = run(capsys, "verify", "kernel-transport", "--n", "100000", "--seed", "7")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS  kernel-transport max rel error")


def test_verify_json_is_byte_identical(capsys):
    argv = ("verify", "kernel-transport", "--n", "2000", "--seed", "3", "--output", "-")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert json.loads(a)["rng"].startswith("numpy.random.PCG64")


def test_verify_csv_and_timings(capsys, tmp_path):
    p = tmp_path / "r.csv"
    code, _, _ = run(capsys, "verify", "minsky", "--n", "1000", "--format", "csv",
                     "--timings", "--output", str(p))
    assert code == 0
    raw = p.read_bytes()
    assert b"\r" not in raw
    header = raw.decode().splitlines()[0]
    assert header == "name,anchor,computed,expected,tolerance,pass,runtime"


def test_verify_failing_check_exits_1(capsys):
    # a tolerance no quadrature can meet makes the suite fail, not crash
    code, out, _ = run(capsys, "verify", "derivative", "--tol", "1e-30")
    assert code == 1
    assert "FAIL" in out


def test_verify_rejects_bad_numbers(capsys):
    for argv in (("verify", "minsky", "--n", "0"), ("verify", "minsky", "--tol", "-1")):
        with pytest.raises(SystemExit) as exc:
            main(list(argv))
        assert exc.value.code == 2
    capsys.readouterr()


def test_table_schwarz(capsys):
    code, out, _ = run(capsys, "table", "schwarz", "--heights", "1,0.1,0.01,0.001")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "h,poisson_integral,boundary_value,gap"
    gaps = [float(line.split(",")[3]) for line in lines[1:]]
    assert len(gaps) == 4
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_table_ray(capsys, tmp_path):
    p = tmp_path / "ray.csv"
    code, _, _ = run(capsys, "table", "ray", "--t", "1..20", "--output", str(p))
    assert code == 0
    raw = p.read_bytes()
    assert b"\r\n" not in raw
    rows = raw.decode().splitlines()
    assert rows[0] == "t,exp_pairing,limit,diff"
    assert len(rows) == 21
    t, e, lim, diff = map(float, rows[-1].split(","))
    assert t == 20.0 and abs(e - lim) <= 1e-4


@pytest.mark.parametrize("scan, flag", [("schwarz", "--heights"), ("ray", "--t")])
def test_table_empty_scan_exits_2(capsys, scan, flag):
    code, _, err = run(capsys, "table", scan, flag, "")
    assert code == 2
    assert "empty" in err


def test_table_bad_heights(capsys):
    code, _, _ = run(capsys, "table", "schwarz", "--heights", "1,-0.1")
    assert code == 2


def test_track_command(capsys, tmp_path):
    p = tmp_path / "t.tt"
    p.write_text(dump_track(torus_track()))
    code, out, _ = run(capsys, "track", str(p))
    assert code == 0
    assert "cone_dimension 2" in out
    p.write_text("traintrack 1 1\nbranch a\nbranch a\n")
    code, _, err = run(capsys, "track", str(p))
    assert code == 2 and "line 3" in err
