import csv
import io
import json

import pytest

from qobdd import cli


def call(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_goodset(capsys):
    code, out = call(capsys, "goodset", "--m", "16", "--epsilon", "0.25", "--seed", "3")
    obj = json.loads(out)
    assert code == 0 and obj["verified"] == "full" and obj["max_squared_average"] < 0.25
    code, out = call(capsys, "goodset", "--m", "12", "--epsilon", "0.5", "--mode", "exhaustive")
    assert code == 0 and json.loads(out)["verified"] == "full"


def test_goodset_failure_exit_code(capsys):
    code, _ = call(capsys, "goodset", "--m", "2", "--epsilon", "0.5", "--attempts", "3")
    assert code == 2


def test_build_sweep_matches_verify(tmp_path, capsys):
    code, out = call(capsys, "build", "--fn", "eq", "--n", "3", "--epsilon", "0.25")
    assert code == 0
    envelope = json.loads(out)
    assert envelope["measures"]["width"] == envelope["measures"]["t"] * 2
    path = tmp_path / "eq3.json"
    path.write_text(out)

    code, out = call(capsys, "sweep", str(path))
    swept = json.loads(out)
    code, out = call(capsys, "verify", "--fn", "eq", "--n", "3", "--epsilon", "0.25", "--probabilities")
    verified = json.loads(out)
    assert code == 0 and verified["passed"]
    assert swept["probabilities"] == verified["probabilities"]
    assert swept["kind"] == "one-sided"
    assert swept["max_closed_form_delta"] <= 1e-9


def test_sweep_csv(tmp_path, capsys):
    _, out = call(capsys, "build", "--fn", "mod:2", "--fn", "mod:3", "--n", "4", "--epsilon", "0.2")
    path = tmp_path / "conj.json"
    path.write_text(out)
    code, out = call(capsys, "sweep", str(path), "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 16
    assert set(rows[0]) == {"input", "f", "g1", "g2", "closed_form", "simulated", "delta"}
    assert all(float(r["delta"]) <= 1e-9 for r in rows)


def test_dense_program_sweeps_without_envelope(tmp_path, capsys):
    _, out = call(capsys, "build", "--fn", "mod:5", "--n", "3", "--epsilon", "0.3", "--dense")
    envelope = json.loads(out)
    path = tmp_path / "raw.json"
    path.write_text(json.dumps(envelope["program"]))
    code, out = call(capsys, "sweep", str(path), "--fn", "mod:5", "--n", "3")
    assert code == 0 and json.loads(out)["kind"] == "one-sided"


def test_lifted_modulus_recorded(capsys):
    _, out = call(capsys, "build", "--fn", "mod:3", "--n", "4", "--epsilon", "0.25")
    envelope = json.loads(out)
    assert envelope["lifted_from"] == "3"
    assert int(envelope["spec"]["goodset"]["m"]) % 3 == 0


def test_verify_general(capsys):
    code, out = call(capsys, "verify", "--fn", "mod:2", "--fn", "mod:3", "--n", "6", "--epsilon", "0.09")
    obj = json.loads(out)
    assert code == 0 and obj["general"] and obj["max_negative_acceptance"] <= 0.65 + 1e-9


def test_bounds(capsys):
    code, out = call(capsys, "bounds", "--fn", "eq", "--n", "4", "--check")
    obj = json.loads(out)
    assert code == 0 and obj["det_width"] == 16 and obj["width_bound_respected"]


def test_project(tmp_path, capsys):
    poly = tmp_path / "g.json"
    proj = tmp_path / "pi.json"
    poly.write_text(json.dumps({"m": "3", "c0": "0", "coeffs": ["1", "1"]}))
    proj.write_text(json.dumps({"p_n": 2, "n": 1, "map": [{"kind": "c1"}, {"kind": "var", "i": 1}]}))
    code, out = call(capsys, "project", str(poly), str(proj))
    obj = json.loads(out)
    assert code == 0 and obj["poly"] == {"m": "3", "c0": "1", "coeffs": ["1"]} and obj["read_once"]


def test_input_errors(capsys):
    assert call(capsys, "verify", "--fn", "nope", "--n", "3")[0] == 2
    assert call(capsys, "verify", "--fn", "eq")[0] == 2
    assert call(capsys, "verify", "--fn", "palindrome", "--n", "30")[0] == 2
    with pytest.raises(SystemExit):
        cli.main(["build", "--epsilon", "abc"])
