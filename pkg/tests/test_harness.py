from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from mlh.errors import SchemaError
from mlh.harness.cli import main
from mlh.harness.fixtures import fixture, fixture_names
from mlh.harness.instances import generate_random_instance, light_cone_instance, random_ssi_affine
from mlh.harness.manifest import DEFAULT_TOL, default_tolerance, load_manifest
from mlh.harness.runner import report_json, run


def _cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.fixture
def manifest_file(tmp_path):
    def write(data, name="m.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return write


# -- schema ---------------------------------------------------------------------------


def _base():
    return json.loads(json.dumps(fixture("invariant-hyperplane")))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("ambient"),
    lambda d: d["ambient"].update(signature=[1, -1]),
    lambda d: d["metallic"].update(p=0),
    lambda d: d["hypersurface"].update(c=[1, 0]),
    lambda d: d.update(backend="quantum"),
    lambda d: d.update(samples=-1),
    lambda d: d.update(screen={"policy": "override"}),
])
def test_schema_errors_exit_4(mutate, manifest_file):
    data = _base()
    mutate(data)
    with pytest.raises(SchemaError):
        load_manifest(data)
    code, out = _cli("verify", manifest_file(data))
    assert code == 4
    assert json.loads(out)["error"] == "schema"


def test_unreadable_and_invalid_json(manifest_file, tmp_path):
    assert _cli("verify", str(tmp_path / "missing.json"))[0] == 4
    assert _cli("verify", manifest_file("{not json"))[0] == 4


def test_unknown_identity_exit_4(manifest_file):
    code, out = _cli("verify", manifest_file(_base()), "--identities", "EQ30,NOPE")
    assert code == 4 and "NOPE" in out


def test_every_fixture_validates():
    for name in fixture_names():
        load_manifest(fixture(name))


# -- tolerance --------------------------------------------------------------------------


def test_mlh_tol_override(monkeypatch, manifest_file):
    monkeypatch.delenv("MLH_TOL", raising=False)
    assert default_tolerance() == DEFAULT_TOL
    monkeypatch.setenv("MLH_TOL", "1e-6")
    assert default_tolerance() == 1e-6
    data = _base()
    data.pop("tolerance", None)
    code, out = _cli("verify", manifest_file(data), "--no-timing")
    assert code == 0 and json.loads(out)["tolerance"] == 1e-6
    code, out = _cli("verify", manifest_file(data), "--no-timing", "--tol", "1e-4")
    assert json.loads(out)["tolerance"] == 1e-4


@pytest.mark.parametrize("raw", ["abc", "-1", "0"])
def test_invalid_mlh_tol_is_schema_error(monkeypatch, manifest_file, raw):
    monkeypatch.setenv("MLH_TOL", raw)
    with pytest.raises(SchemaError):
        default_tolerance()
    assert _cli("verify", manifest_file(_base()))[0] == 4


# -- commands ---------------------------------------------------------------------------


def test_check_command(manifest_file):
    code, out = _cli("check", manifest_file(fixture("ex-1-structure")))
    assert code == 0
    data = json.loads(out)
    assert data["structure_check"]["passed"]


def test_classify_runs_no_identities(manifest_file):
    code, out = _cli("classify", manifest_file(fixture("light-cone-r41")), "--no-timing")
    data = json.loads(out)
    assert code == 0 and data["identities"] == []
    assert data["classification"]["kind"] == "Generic"


def test_verify_exit_codes(manifest_file):
    assert _cli("verify", manifest_file(fixture("invariant-hyperplane")))[0] == 0
    assert _cli("verify", manifest_file(fixture("ex-2-hyperplane")))[0] == 3
    code, out = _cli("verify", manifest_file(fixture("ssi-example-2")))
    assert code == 3 and "classification" in out


def test_identity_failure_exit_2(manifest_file):
    data = light_cone_instance(samples=5, derivative="fd")
    code, out = _cli("verify", manifest_file(data), "--tol", "1e-15", "--no-timing")
    assert code == 2
    assert json.loads(out)["status"] == "fail"


def test_text_format(manifest_file):
    code, out = _cli("verify", manifest_file(_base()), "--format", "text", "--no-timing")
    assert code == 0
    assert out.startswith("manifest: ") and "status: pass" in out


def test_dump_geometry(manifest_file):
    code, out = _cli("verify", manifest_file(_base()), "--dump-geometry", "--samples", "2", "--no-timing")
    data = json.loads(out)
    assert code == 0 and len(data["geometry"]) >= 1
    assert {"E", "N"} <= set(data["geometry"][0])


def test_fixtures_listing_and_run():
    code, out = _cli("fixtures")
    listing = json.loads(out)
    assert code == 0 and [f["name"] for f in listing] == fixture_names()
    code, out = _cli("fixtures", "--format", "text")
    assert code == 0 and len(out.strip().splitlines()) == len(fixture_names())
    code, out = _cli("fixtures", "--run", "--no-timing")
    assert code == 0
    assert all(d["expectation_met"] for d in json.loads(out))


def test_random_command():
    code, out = _cli("random", "--p", "2", "--q", "3", "--dim", "5", "--signature=-,+,-,+,+", "--seed", "4")
    assert code == 0
    data = json.loads(out)
    load_manifest(data)
    assert run(data, timing=False).exit_code == 0
    assert _cli("random", "--p", "1", "--q", "1", "--dim", "4", "--signature=+,+,+,+")[0] == 3
    assert _cli("random", "--p", "1", "--q", "1", "--dim", "3", "--signature=-,+,+,+")[0] == 3


# -- claims and determinism --------------------------------------------------------------


def test_claims_record_discrepancies():
    rep = run(fixture("ssi-example-1"), timing=False)
    tags = {c["quantity"]: c["match"] for c in rep.claims}
    assert tags["E"] and tags["JE"]
    assert not tags["N"] and not tags["JN"]
    assert rep.classification["kind"] == "ScreenSemiInvariant"


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_random_instances_pass(seed):
    for inst in (generate_random_instance(1, 1, 4, [-1, 1, -1, 1], seed),
                 random_ssi_affine(1, 2, seed)):
        rep = run(inst, timing=False)
        assert rep.exit_code == 0, rep.to_json()


def test_report_is_deterministic():
    a = report_json(run(fixture("curved-ssi-r52"), timing=False))
    b = report_json(run(fixture("curved-ssi-r52"), timing=False))
    assert a == b


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "mlh.harness.cli", "fixtures", "--format", "text"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "ssi-example-1" in out.stdout
