import csv
import json
from pathlib import Path

import pytest

from laxjac import __version__
from laxjac.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", "--x", "0.6,0,0.8", "--v", "0,1,0", "--t", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["header"]["program"] == "laxjac"
    assert doc["header"]["version"] == __version__
    assert doc["header"]["config"]["tol"] == 1e-12
    assert doc["summary"]["final_H_drift"] < 1e-9


def test_simulate_csv(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, _, _ = run(capsys, "simulate", "--t", "1", "--samples", "5", "--format", "csv",
                     "-o", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    assert any(ln.startswith("# tol=") for ln in meta)
    rows = list(csv.reader(ln for ln in lines if not ln.startswith("#")))
    assert rows[0][0] == "t" and len(rows) == 6
    assert all(len(r) == len(rows[0]) for r in rows)


def test_singular_curve_reported(capsys):
    code, out, _ = run(capsys, "curve", "--h", "1", "--k", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["singular"] is True
    assert abs(doc["disc"][0]) < 1e-12 if isinstance(doc["disc"], list) else abs(doc["disc"]) < 1e-12


def test_periods_on_singular_curve_is_numerical_failure(capsys):
    code, out, err = run(capsys, "periods", "--h", "1", "--k", "0")
    assert code == 2
    assert "SingularCurveError" in err
    assert json.loads(out)["error"] == "SingularCurveError"


def test_monodromy(capsys):
    code, out, _ = run(capsys, "monodromy", "--center", "1,0", "--radius", "0.3")
    assert code == 0
    doc = json.loads(out)
    assert doc["trace_M"] == 2 and doc["det_M"] == 1
    assert all(isinstance(x, int) for row in doc["M_ext"] for x in row)


def test_frequency_grid_csv(capsys):
    code, out, _ = run(capsys, "frequency", "--h", "1.3,1.4", "--k", "0.6", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(ln for ln in out.splitlines() if not ln.startswith("#")))
    assert len(rows) == 3
    assert "T_r" in rows[0]


@pytest.mark.parametrize("argv", [
    ["simulate", "--tol", "1e-20"],
    ["simulate", "--x", "1,2"],
    ["nonsense"],
    ["monodromy", "--steps", "8"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("LAXJAC_TOL", "1e-10")
    code, out, _ = run(capsys, "invariants")
    assert code == 0
    assert json.loads(out)["header"]["config"]["tol"] == 1e-10


def test_off_manifold_state(capsys):
    code, out, err = run(capsys, "invariants", "--x", "1,0,1", "--v", "0,0,0")
    assert code == 2 and "ConstraintViolation" in err


def test_deterministic_output(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["equivariance", "--seed", "7", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "2,3")
    assert code == 0
    doc = json.loads(out)
    assert [r["criterion"] for r in doc["results"]] == [2, 3]


SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


@pytest.mark.parametrize("argv", [
    ["simulate", "--t", "1", "--samples", "3"],
    ["invariants"],
    ["curve"],
    ["periods"],
    ["periods", "--h", "1", "--k", "0"],
    ["abel-fit", "--samples", "40"],
    ["equivariance"],
    ["monodromy"],
    ["frequency", "--h", "1.3,5.0", "--k", "0.6"],
    ["discriminant", "--grid", "41"],
    ["selftest", "--only", "2"],
])
def test_output_matches_schema(capsys, argv):
    jsonschema = pytest.importorskip("jsonschema")
    main(argv)
    doc = json.loads(capsys.readouterr().out)
    schema = json.loads((SCHEMAS / f"{argv[0]}.schema.json").read_text())
    jsonschema.validate(doc, schema)
