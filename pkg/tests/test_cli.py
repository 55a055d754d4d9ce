import io
import json

import pytest

from flexpoly.cli import main
from flexpoly.io import dumps, spec_to_json
from flexpoly.witnesses import rational_witness


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def euclid_spec(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text(dumps(spec_to_json(rational_witness("euclidean", (1, 1, 1)))))
    return p


def test_witness_construct_verify(tmp_path, capsys):
    code, out, _ = run(["witness", "--family", "rational", "--space", "spherical", "--type", "2,1"], capsys)
    assert code == 0
    spec = tmp_path / "s.json"
    spec.write_text(out)
    code, out, _ = run(["construct", str(spec)], capsys)
    assert code == 0 and json.loads(out)["classification"]["verdict"] == "spherical"
    code, out, _ = run(["verify", str(spec), "--samples", "40"], capsys)
    assert code == 0 and json.loads(out)["passed"] is True


def test_verify_failure_exit_code(euclid_spec, capsys):
    assert run(["verify", str(euclid_spec), "--samples", "20", "--tol", "1e-30"], capsys)[0] == 1


def test_output_is_deterministic(euclid_spec, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["flex", str(euclid_spec), "--samples", "10", "--out", str(a)]) == 0
    assert main(["flex", str(euclid_spec), "--samples", "10", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    frames = json.loads(a.read_text())["frames"]
    assert len(frames) == 10


def test_obj_export(euclid_spec, tmp_path, capsys):
    d = tmp_path / "objs"
    assert main(["flex", str(euclid_spec), "--samples", "5", "--obj-dir", str(d), "--out", str(tmp_path / "f.json")]) == 0
    files = sorted(d.glob("*.obj"))
    assert len(files) == 5
    lines = files[0].read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 6
    assert sum(line.startswith("f ") for line in lines) == 8


def test_obj_refused_off_euclidean(tmp_path, capsys):
    spec = tmp_path / "s.json"
    spec.write_text(dumps(spec_to_json(rational_witness("spherical", (1, 1, 1)))))
    assert run(["flex", str(spec), "--obj-dir", str(tmp_path / "o")], capsys)[0] == 4


def test_bad_input_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, _, err = run(["construct", str(bad)], capsys)
    assert code == 2 and "line 1" in err
    bad.write_text(json.dumps({"curve": {"family": "rational", "mu": [1, 2, 3]}, "blocks": [[0], [1]], "lambda": [1, 2]}))
    assert run(["construct", str(bad)], capsys)[0] == 2
    assert run(["witness", "--family", "rational", "--space", "spherical", "--type", "a,b"], capsys)[0] == 2


def test_not_realisable_exit_code(capsys):
    code, _, err = run(["witness", "--family", "exotic", "--space", "hyperbolic", "--type", "1,1,1"], capsys)
    assert code == 3 and "not realisable" in err


def test_stdin_and_other_commands(monkeypatch, capsys):
    curve = {"family": "rational", "mu": [0.5, -0.25, 2.0]}
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(curve)))
    code, out, _ = run(["coeffs", "-"], capsys)
    assert code == 0
    cf = json.loads(out)
    assert cf["a"][0][0] is None and "screen" in cf
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"n": 3, "G": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "H": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})))
    code, out, _ = run(["classify", "-"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "spherical"


def _fit_via_cli(tmp_path, capsys, m_prime):
    curve = tmp_path / "c.json"
    curve.write_text(json.dumps({"family": "elliptic1", "k": 0.8, "sigma": [0.0, 0.4, 1.1], "m_prime": m_prime}))
    code, out, _ = run(["coeffs", str(curve)], capsys)
    assert code == 0
    cf = json.loads(out)
    cf.pop("screen")
    coeffs = tmp_path / "cf.json"
    coeffs.write_text(json.dumps(cf))
    return run(["fit", str(coeffs)], capsys)


def test_fit_round_trip(tmp_path, capsys):
    code, out, _ = _fit_via_cli(tmp_path, capsys, 3)
    assert code == 0
    assert abs(json.loads(out)["k"] - 0.8) < 1e-8


def test_fit_outside_dn_form_is_an_error(tmp_path, capsys):
    # mixed dn / cs coordinates are not covered by the fit
    code, _, err = _fit_via_cli(tmp_path, capsys, 2)
    assert code == 1 and "error" in err
