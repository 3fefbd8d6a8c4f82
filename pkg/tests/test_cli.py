import json
import math
from pathlib import Path

import pytest

from hdivbasis import cli
from hdivbasis.assembly import matrix_from_csv

GOLDEN = Path(__file__).parent / "golden" / "tables.json"


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cond_tri_p1(capsys):
    code, out, _ = run(capsys, "cond", "--element", "tri", "--order", "1", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "cond"
    assert report["payload"]["kappa_mass"] == pytest.approx(2.016e1, rel=0.005)
    assert report["payload"]["kappa_stiffness"] == pytest.approx(1.040e1, rel=0.005)
    assert report["timestamp"] is None
    assert set(report["meta"]) == {"package", "version", "python", "numpy"}


def test_dims_tet_p3(capsys):
    code, out, _ = run(capsys, "dims", "--element", "tet", "--order", "3")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["dimension"] == 60
    assert payload["counts"]["EdgeFaceFirst"] == 36


def test_degeneracy(capsys):
    code, out, _ = run(capsys, "degeneracy", "--element", "tet", "--order", "2")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["deficit"] >= 1
    (vec,) = payload["nullspace"]
    assert all(v in ("0", "1", "-1") or "/" in v or v.lstrip("-").isdigit() for v in vec)
    assert payload["nonzero_entries"] == [12]


def test_failed_check_exits_one(capsys):
    code, _, err = run(capsys, "check-rank", "--element", "tet", "--order", "2", "--variant", "ac")
    assert code == 1
    assert "FAILED rank = count" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["dims", "--element", "prism", "--order", "1"],
        ["dims", "--element", "tri", "--order", "0"],
        ["dims", "--element", "hex", "--order", "7"],
        ["dims", "--element", "tri"],
        ["dims", "--order", "1"],
        ["mass", "--element", "quad", "--order", "1", "--variant", "first"],
        ["mass", "--element", "tet", "--order", "2", "--variant", "ac"],
        ["degeneracy", "--element", "tri", "--order", "2"],
        ["dims", "--element", "tri", "--order", "1", "--unknown"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "usage:" in err


@pytest.mark.parametrize(
    "command", ["check-orthonormal", "check-divfree", "check-traces", "check-rank", "dims", "cond"]
)
@pytest.mark.parametrize("element", ["quad", "hex", "tri", "tet"])
def test_checks_pass(capsys, command, element):
    code, out, _ = run(capsys, command, "--element", element, "--order", "2")
    assert code == 0, out
    assert json.loads(out)["passed"] is True


def test_mass_csv_round_trip(capsys, tmp_path):
    target = tmp_path / "m.csv"
    code, out, _ = run(capsys, "mass", "--element", "tri", "--order", "2", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    a = matrix_from_csv(target.read_text())
    assert a.shape == (12, 12)
    _, out, _ = run(capsys, "mass", "--element", "tri", "--order", "2")
    assert json.loads(out)["payload"]["matrix"] == a.tolist()


def test_stiffness_quadrature_path(capsys):
    _, exact, _ = run(capsys, "stiffness", "--element", "quad", "--order", "2")
    _, quad, _ = run(capsys, "stiffness", "--element", "quad", "--order", "2", "--path", "quadrature")
    a = json.loads(exact)["payload"]["matrix"]
    b = json.loads(quad)["payload"]["matrix"]
    assert max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)) <= 1e-12


def test_seventeen_significant_digits():
    text = cli.dumps({"x": 0.1, "y": [1 / 3], "z": 2.0})
    assert '"x": 0.10000000000000001' in text
    assert "0.33333333333333331" in text
    assert json.loads(text) == {"x": 0.1, "y": [1 / 3], "z": 2.0}


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        cli.dumps({"x": math.inf})


def test_csv_for_reports(capsys):
    code, out, _ = run(capsys, "dims", "--element", "quad", "--order", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert "payload.dimension,12" in lines


def test_deterministic_output(capsys):
    argv = ["augment-demo", "--element", "tri", "--samples", "5", "--seed", "4"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    other = run(capsys, *argv[:-1], "5")[1]
    assert other != first


def test_timestamp_flag(capsys):
    _, out, _ = run(capsys, "dims", "--element", "tri", "--order", "1", "--timestamp")
    assert json.loads(out)["timestamp"].endswith("+00:00")


def test_augment_demo_all_kinds(capsys):
    code, out, _ = run(capsys, "augment-demo", "--samples", "10")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert {"quad", "hex", "tri", "tet"} <= set(payload)
    assert payload["tet"]["bubble_order"] == 4


def _close(a, b, path="payload"):
    if isinstance(a, dict):
        assert list(a) == list(b), path
        for k in a:
            _close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{i}]")
    elif isinstance(a, float):
        assert a == pytest.approx(b, rel=1e-9), path
    else:
        assert a == b, path


def test_tables_match_golden(capsys, tmp_path):
    target = tmp_path / "tables.json"
    code, _, _ = run(capsys, "tables", "--out", str(target))
    report = json.loads(target.read_text())
    _close(report["payload"], json.loads(GOLDEN.read_text()))
    # the exit code mirrors the reference comparisons inside the report
    assert code == (0 if report["passed"] else 1)
