import io
import json
import subprocess
import sys

import pytest

from fanlab import fixtures
from fanlab.cech import invariant_report
from fanlab.cli import run_cli
from fanlab.fan import FanError
from fanlab.io import emit_report, fan_json, parse_fan_file, report_from_json

REPORT_KEYS = [
    "r", "s", "n_rays", "counts", "top_dim", "complete", "simplicial", "rho0", "rho1",
    "rho1_prime", "rho2", "kappa", "cech_dims", "euler", "class_group", "nonprojective_certificate",
]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_minimal():
    f = parse_fan_file(b'{"ambient_rank":2,"rays":[[1,0],[0,1]],"maximal_cones":[[0,1]]}')
    assert f.rays == ((1, 0), (0, 1))


@pytest.mark.parametrize(
    "text,message",
    [
        ('{"ambient_rank":2,"rays":[[2,4]],"maximal_cones":[[0]]}', "ray 0 not primitive (use --normalize)"),
        ('{"ambient_rank":2,"rays":[],"maximal_cones":[],"extra":1}', "schema error: $.extra"),
        ('{"ambient_rank":2,"rays":[[1,0.5]],"maximal_cones":[[0]]}', "schema error: $.rays[0][1]"),
        ('{"ambient_rank":2,"rays":[[1,0]]}', "schema error: $.maximal_cones"),
        ('[1,2]', "schema error: $"),
        ('{"ambient_rank":true,"rays":[],"maximal_cones":[]}', "schema error: $.ambient_rank"),
        ('not json', "schema error: $"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(FanError) as info:
        parse_fan_file(text.encode())
    assert info.value.errors[0].startswith(message)


def test_parse_normalize():
    f = parse_fan_file(b'{"ambient_rank":2,"rays":[[2,4]],"maximal_cones":[[0]]}', normalize=True)
    assert f.rays == ((1, 2),)


@pytest.mark.parametrize("name", fixtures.names())
def test_fixture_roundtrip(name):
    raw = fixtures.raw(name)
    f = parse_fan_file(raw)
    assert fan_json(f) == raw
    assert parse_fan_file(fan_json(f)) == f


@pytest.mark.parametrize("name", fixtures.names())
def test_fixture_expectations(name):
    f = fixtures.load(name)
    rep = invariant_report(f)
    for key, value in fixtures.expected(name).items():
        if key == "invariant_factors":
            from fanlab.brauer import invariant_factors

            assert list(invariant_factors(f).a) == value
        elif key == "bound":
            from fanlab.bound import kappa0_upper_bound

            assert kappa0_upper_bound(f).bound == value
        elif key == "class_group":
            assert rep.class_group.to_json() == value
        else:
            got = getattr(rep, key)
            assert (list(got) if isinstance(got, tuple) else got) == value, key


def test_report_json_roundtrip():
    for name in ["ex1-delta", "cube", "torus-r3"]:
        f = fixtures.load(name)
        rep = invariant_report(f)
        data = emit_report(rep, "json", fan=f)
        obj = json.loads(data)
        assert list(obj)[: len(REPORT_KEYS)] == REPORT_KEYS
        assert "version" in obj and len(obj["input_digest"]) == 64
        assert report_from_json(data) == rep


def test_report_values_in_json():
    ex1 = emit_report(invariant_report(fixtures.load("ex1-delta")), "json")
    assert b'"rho1":1' in ex1 and b'"rho2":1' in ex1
    assert b'"rho0":3' in emit_report(invariant_report(fixtures.load("torus-r3")), "json")
    assert b'"kappa":[4,2,0]' in emit_report(invariant_report(fixtures.load("cube")), "json")


def test_cli_invariants(tmp_path):
    path = tmp_path / "ex1.json"
    path.write_bytes(fixtures.raw("ex1-delta"))
    code, out, err = run("invariants", str(path))
    assert code == 0 and err == ""
    assert any(line.split() == ["rho1", "1"] for line in out.splitlines())
    code, out, _ = run("invariants", "ex1-delta", "--json")
    assert json.loads(out)["rho2"] == 1


def test_cli_exit_codes(tmp_path):
    code, _, err = run("brauer", "cube", "--nu", "2", "--field", "real")
    assert code == 3 and "fan not smooth" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"ambient_rank":1,"rays":[[2]],"maximal_cones":[[0]]}')
    code, out, err = run("validate", str(bad))
    assert code == 1 and out == "" and "ray 0 not primitive (use --normalize)" in err
    assert run("validate", str(bad), "--normalize")[0] == 0
    assert run("invariants", "no-such-thing")[0] == 2
    assert run("strata", "cube", "--radius", "x/y")[0] == 2
    assert run("brauer", "p2", "--nu", "1")[0] == 2
    assert run("frobnicate")[0] == 2


def test_cli_brauer_custom_field(tmp_path):
    field = tmp_path / "k.json"
    field.write_text('{"kind":"custom","h1_nu":{"torsion":[2]},"brauer_nu":{"torsion":[2]}}')
    code, out, _ = run("brauer", "two-rays-12", "--nu", "2", "--field", f"custom={field}", "--json")
    assert code == 0
    assert json.loads(out)["brauer_nu"] == {"free_rank": 0, "torsion": [2, 2]}


def test_cli_fixtures():
    code, out, _ = run("fixtures", "list")
    assert code == 0
    assert out.split() == [
        "ex1-delta", "ex1-delta-prime", "cube", "cube-prime", "fig2a", "ex5", "p2", "torus-r3", "two-rays-12",
    ]
    code, out, _ = run("fixtures", "emit", "cube")
    assert out.encode() == fixtures.raw("cube")
    assert run("fixtures", "emit", "nope")[0] == 2


def test_cli_bound_and_strata():
    code, out, _ = run("bound", "ex5", "--json")
    assert code == 0 and json.loads(out)["bound"] == 4
    code, out, _ = run("strata", "p2", "--samples", "10", "--seed", "1", "--den", "50", "--radius", "1/20", "--json")
    assert code == 0 and json.loads(out)["histogram"] == {"3": 10}
    code, out, _ = run("strata", "p2", "--samples", "5", "--generic-check", "--json")
    assert code == 0 and json.loads(out) == {"applicable": False}


def test_cli_deterministic_bytes():
    argv = [sys.executable, "-m", "fanlab", "strata", "ex1-delta", "--samples", "12", "--seed", "3", "--json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
