import csv
import io
import json

import pytest

from nritt import __version__
from nritt.cli import run
from nritt.matrixkit import Operator


@pytest.fixture
def files(tmp_path):
    def put(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return {
        "op": put("op.json", Operator.from_spectrum([0.5, 0.9]).to_json()),
        "phi": put("phi.json", {"type": "poly", "coeffs": [1, -2, 1]}),
        "f": put("f.json", {"type": "rational", "num": [0, 1], "den": [1, 2, 1]}),
        "pole": put("pole.json", {"type": "rational", "num": [1], "den": [-0.7, 1]}),
        "pts": put("pts.json", [[1, 0], [2, 0]]),
        "fam": put("fam.json", [{"type": "poly", "coeffs": [1, -1]}, {"type": "poly", "coeffs": [1, -2, 1]}]),
        "dir": tmp_path,
    }


def call(argv, tmp):
    out = tmp / "out.txt"
    code = run(argv + ["--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_classify(files):
    code, text = call(["classify", "--input", files["op"], "--grid", "16"], files["dir"])
    rep = json.loads(text)
    assert code == 0 and rep["admissible"] is True
    assert rep["meta"]["version"] == __version__
    assert rep["meta"]["seed"] == 20240521
    assert len(rep["meta"]["config_hash"]) == 64


def test_apply(files):
    code, text = call(["apply", "--input", files["op"], "--function", files["phi"]], files["dir"])
    rep = json.loads(text)
    assert code == 0
    assert rep["result"]["re"][0][0] == pytest.approx(0.25, abs=1e-8)
    assert rep["result"]["re"][1][1] == pytest.approx(0.01, abs=1e-8)
    assert rep["nodes"] > 0


def test_apply_with_pole_is_a_domain_error(files):
    code, text = call(["apply", "--input", files["op"], "--function", files["pole"], "--extended"], files["dir"])
    assert code == 1
    assert json.loads(text)["error"]["type"] == "Unbounded"


def test_transfer(files):
    code, text = call(["transfer", "--input", files["op"], "--function", files["f"]], files["dir"])
    assert code == 0 and json.loads(text)["deviation"] < 1e-6


def test_byte_identical_outputs(files):
    argv = ["rbound", "--input", files["op"], "--resolvent-family", "--trials", "4"]
    _, a = call(argv, files["dir"])
    _, b = call(argv, files["dir"])
    assert a == b and "C_lower" in a


def test_config_hash_tracks_inputs(files):
    _, a = call(["classify", "--input", files["op"], "--grid", "8"], files["dir"])
    _, b = call(["classify", "--input", files["op"], "--grid", "9"], files["dir"])
    assert json.loads(a)["meta"]["config_hash"] != json.loads(b)["meta"]["config_hash"]


def test_sweep_csv(files):
    code, text = call(["sweep", "--input", files["op"], "--grid", "4"], files["dir"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["angle", "bound", "K_lower", "nodes"]
    assert len(rows) > 1 and all(float(r[2]) >= 1.0 - 1e-9 for r in rows[1:])


def test_sweep_profile(files):
    code, text = call(["sweep", "--rule", "1-2^-(n+1)", "--dim", "6", "--grid", "6"], files["dir"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0][:4] == ["angle", "bound", "K_lower", "nodes"]
    assert all(float(r[4]) <= float(r[1]) for r in rows[1:])


def test_quadratic(files):
    code, text = call(
        ["quadratic", "--input", files["op"], "--function", files["fam"], "--gamma", "1.0", "--trials", "4"], files["dir"]
    )
    assert code == 0 and 0 < json.loads(text)["C_lower"] <= 1 + 1e-9


def test_multiplier_gen(files):
    code, text = call(["multiplier", "gen", "--rule", "1-2^-n", "--dim", "4", "--classify"], files["dir"])
    rep = json.loads(text)
    assert code == 0 and rep["operator"]["dim"] == 4 and rep["classify"]["admissible"]


def test_carleson(files):
    code, text = call(["carleson", "--points", files["pts"]], files["dir"])
    assert code == 0 and json.loads(text)["delta_min"] == pytest.approx(1 / 3)


def test_io_errors(files, capsys):
    assert run(["classify", "--input", str(files["dir"] / "missing.json")]) == 2
    bad = files["dir"] / "bad.json"
    bad.write_text("{not json")
    assert run(["apply", "--input", files["op"], "--function", str(bad)]) == 2
    assert run(["nonsense"]) == 2
    assert run(["apply", "--input", files["op"]]) == 2
    capsys.readouterr()


def test_not_classifiable_exit_code(files):
    p = files["dir"] / "two.json"
    p.write_text(json.dumps(Operator.from_spectrum([2.0]).to_json()))
    code, text = call(["classify", "--input", str(p)], files["dir"])
    assert code == 1 and json.loads(text)["error"]["type"] == "NotClassifiable"
