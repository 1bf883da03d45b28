import json
import os
import subprocess
import sys

import pytest

from gfrob.bundle import BundleError, bundle_to_json, load_bundle, load_bundle_data
from gfrob.cli import execute, exit_code, main, render_report
from gfrob.errors import ParseError, UnknownName

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
BUNDLES = os.path.join(ROOT, "bundles")


def path(name):
    return os.path.join(BUNDLES, name)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_trivial_bundle_loads():
    b = load_bundle_data({"schema": 1, "groupoids": {"T": {"family": "trivial", "objects": ["a"]}}})
    assert b.groupoids["T"].n_arrows == 1
    rep = execute("info", ["T"], b)
    assert rep["result"]["component_count"] == 1 == rep["result"]["objects"]


def test_broken_composition_names_triple():
    raw = {"schema": 1, "groupoids": {"Z3": {
        "objects": ["*"],
        "arrows": [{"name": n, "src": "*", "tgt": "*"} for n in "eab"],
        "identities": {"*": "e"},
        "composition": [["e", "e", "e"], ["e", "a", "a"], ["e", "b", "b"], ["a", "e", "a"], ["b", "e", "b"],
                        ["a", "a", "e"], ["a", "b", "e"], ["b", "a", "e"], ["b", "b", "a"]]}}}
    with pytest.raises(BundleError) as exc:
        load_bundle_data(raw)
    err = exc.value.errors[0]
    assert err["component"] == "groupoids.Z3" and err["error"] == "AssociativityViolation"
    assert err["witness"] == ["a", "a", "b"]


def test_all_errors_collected():
    raw = {"schema": 1, "groupoids": {"T": {"family": "trivial", "objects": ["a"]}},
           "morphisms": {"m": {"dom": "T", "cod": "nope", "object_map": {}, "arrow_map": {}}},
           "representations": {"r": {"groupoid": "T", "dims": {"a": 1}, "matrices": {"id_a": [["2"]]}}}}
    with pytest.raises(BundleError) as exc:
        load_bundle_data(raw)
    assert [e["component"] for e in exc.value.errors] == ["morphisms.m", "representations.r"]


def test_schema_and_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        load_bundle_data({"schema": 2})
    p = tmp_path / "bad.bundle"
    p.write_text('{"schema": 1,\n  "groupoids": {')
    with pytest.raises(ParseError) as exc:
        load_bundle(str(p))
    assert exc.value.witness["line"] == 2


def test_shipped_fixture_counts():
    b = load_bundle(path("z2-in-s3.bundle"))
    c = b.counts()
    assert (c["groupoids"], c["morphisms"], c["representations"]) == (2, 1, 3)


def test_frobenius_fixture_report(capsys):
    code, out = run(["frobenius", "phi", "--bundle", path("z2-in-s3.bundle"), "--format", "json"], capsys)
    r = json.loads(out)
    assert code == 0 and r["status"] == "pass"
    assert r["result"]["criterion"]["objects"]["*"]["orbits"] == 3
    assert r["result"]["system_verified"] and r["result"]["module_condition"]["passed"]


def test_algebra_map_fixture(capsys):
    code, out = run(["algebra-map", "phi", "--bundle", path("constant-map.bundle"), "--format", "json"], capsys)
    r = json.loads(out)["result"]
    assert code == 0 and r["multiplicative"] is False
    assert r["witness"]["product_of_images"] == [["id_y", "1"]]


def test_exit_codes(tmp_path, capsys):
    assert run(["validate", "--bundle", path("z2-in-s3-system.bundle")], capsys)[0] == 0
    code, out = run(["validate", "--bundle", path("z2-in-s3-corrupt.bundle"), "--format", "json"], capsys)
    assert code == 1
    assert json.loads(out)["result"]["frobenius_systems"]["sys"]["witnesses"]
    assert run(["verify-system", "sys", "--bundle", path("z2-in-s3-corrupt.bundle")], capsys)[0] == 1
    bad = tmp_path / "bad.bundle"
    bad.write_text("{not json")
    assert run(["validate", "--bundle", str(bad)], capsys)[0] == 2
    assert run(["info", "missing", "--bundle", path("z2-in-s3.bundle")], capsys)[0] == 2
    assert run(["induce", "phi", "--bundle", path("z2-in-s3.bundle")], capsys)[0] == 2
    assert run(["bogus", "--bundle", path("z2-in-s3.bundle")], capsys)[0] == 2


def test_other_commands(capsys):
    s = path("structures.bundle")
    z = path("z2-in-s3.bundle")
    for argv in (["orbits", "swap", "--bundle", s], ["quotient", "S3", "A3", "--bundle", s],
                 ["info", "AG", "--bundle", s], ["restrict", "phi", "std", "--bundle", z],
                 ["induce", "phi", "sgn2", "--bundle", z], ["coinduce", "phi", "sgn2", "--bundle", z],
                 ["adjoint-check", "phi", "std", "sgn2", "--bundle", z],
                 ["adjoint-check", "phi", "std", "sgn2", "--side", "left", "--bundle", z],
                 ["projection-formula", "phi", "sgn2", "std", "--bundle", z]):
        code, out = run(argv, capsys)
        assert code == 0, (argv, out)
        assert "status: \"pass\"" in out


def test_frobenius_not_applicable_exits_zero(capsys):
    code, out = run(["frobenius", "phi", "--bundle", path("constant-map.bundle"), "--format", "json"], capsys)
    r = json.loads(out)["result"]
    assert code == 0 and r["applicable"] is False and r["verdict"] == "undecided"


def test_deterministic_output(tmp_path):
    outs = []
    for i in range(2):
        o = tmp_path / f"r{i}.json"
        main(["frobenius", "phi", "--bundle", path("z2-in-s3.bundle"), "--format", "json", "--out", str(o)])
        outs.append(o.read_bytes())
    assert outs[0] == outs[1]
    proc = subprocess.run([sys.executable, "-m", "gfrob.cli", "frobenius", "phi", "--bundle",
                           path("z2-in-s3.bundle"), "--format", "json"], capture_output=True)
    assert proc.returncode == 0 and proc.stdout == outs[0]


def test_bundle_round_trip():
    for name in ("z2-in-s3-system.bundle", "structures.bundle", "constant-map.bundle"):
        b = load_bundle(path(name))
        again = load_bundle_data(json.loads(json.dumps(bundle_to_json(b))))
        for sec in ("groupoids", "morphisms", "actions", "representations", "normal_subgroupoids"):
            assert getattr(again, sec) == getattr(b, sec), (name, sec)
        for k, s in b.frobenius_systems.items():
            assert again.frobenius_systems[k].to_json() == s.to_json()


def test_structured_reports_reload():
    b = load_bundle(path("z2-in-s3.bundle"))
    for cmd, args in (("induce", ["phi", "sgn2"]), ("coinduce", ["phi", "sgn2"]), ("restrict", ["phi", "std"])):
        rep = json.loads(render_report(execute(cmd, args, b), "json"))
        frag = load_bundle_data(rep["result"]["bundle"])
        (rname, r), = frag.representations.items()
        assert list(r.dims) == list(rep["result"]["dims"].values())
    s = load_bundle(path("structures.bundle"))
    rep = json.loads(render_report(execute("quotient", ["S3", "A3"], s), "json"))
    frag = load_bundle_data(rep["result"]["bundle"])
    assert frag.groupoids["S3/A3"].n_arrows == 2


def test_execute_unknown_name():
    b = load_bundle(path("z2-in-s3.bundle"))
    with pytest.raises(UnknownName):
        execute("frobenius", ["nope"], b)
    assert exit_code({"status": "invalid"}) == 2
