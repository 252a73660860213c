import json
import subprocess
import sys
from pathlib import Path

import pytest

from multirec.cli import main

from .golden.regenerate import HERE, run_case

CASES = json.loads((HERE / "cases.json").read_text())
SPECS = HERE / "specs"


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case):
    code, out, _ = run_case(case)
    assert code == case["exit"]
    assert out == (HERE / "expected" / f"{case['name']}.json").read_text()


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.parametrize("spec, t, methods", [
    ("scalar_affine.json", "1,1", ["step", "closed", "fixed-point", "reduction"]),
    ("scalar_affine.json", "3,2", ["step", "closed", "fixed-point", "reduction"]),
    ("commuting_pair.json", "2,3", ["step", "closed", "reduction"]),
    ("affine_three_axis.json", "2,1,3", ["step", "closed", "fixed-point", "reduction"]),
    ("table_shifted.json", "3,2", ["step", "reduction"]),
    ("singular_axis.json", "2,2", ["step", "closed"]),
])
def test_cross_method_agreement(capsys, spec, t, methods):
    outputs = set()
    for method in methods:
        code, out, err = run(capsys, "solve", SPECS / spec, "--t", t, "--method", method)
        assert code == 0, err
        outputs.add(out)
    assert len(outputs) == 1


def test_box_matches_pointwise(capsys):
    code, out, _ = run(capsys, "solve", SPECS / "affine_three_axis.json", "--box", "0,0,0..1,2,1")
    values = json.loads(out)["values"]
    assert code == 0 and len(values) == 12
    for entry in values:
        _, single, _ = run(capsys, "solve", SPECS / "affine_three_axis.json", "--t",
                           ",".join(map(str, entry["t"])), "--method", "fixed-point")
        assert json.loads(single)["x"] == entry["x"]


def test_round_trip_of_outputs(capsys):
    from multirec.scalars import parse_scalar
    _, out, _ = run(capsys, "chi", SPECS / "scalar_affine.json", "--t", "0,0", "--s", "2,1")
    value = json.loads(out)["chi"][0][0]
    assert value == "1/12" and str(parse_scalar(value, "rational")) == "1/12"


def test_inapplicable_methods(capsys):
    code, _, err = run(capsys, "solve", SPECS / "table_shifted.json", "--t", "1,1", "--method", "closed")
    assert code == 1 and "constant coefficients" in err
    code, _, err = run(capsys, "solve", SPECS / "commuting_pair.json", "--t", "1,1", "--method", "fixed-point")
    assert code == 1 and "singular" in err.lower()
    code, _, err = run(capsys, "solve", SPECS / "singular_axis.json", "--t", "1,1", "--method", "reduction")
    assert code == 1 and "invertible" in err
    code, _, err = run(capsys, "solve", SPECS / "jordan_pair.json", "--t", "1,1", "--method", "closed")
    assert code == 1


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "solve", SPECS / "scalar_affine.json", "--t", "1,1,1")
    assert code == 2 and "rank" in err
    code, _, _ = run(capsys, "solve", SPECS / "scalar_affine.json")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "invalid JSON" in err
    code, _, _ = run(capsys, "check", tmp_path / "missing.json")
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["solve", str(SPECS / "scalar_affine.json"), "--t", "x,y"])
    assert info.value.code == 2


def test_trivial_outputs(capsys):
    _, out, _ = run(capsys, "basis", SPECS / "commuting_pair.json", "--t", "0,0")
    assert json.loads(out)["columns"] == [["1", "0"], ["0", "1"]]
    _, out, _ = run(capsys, "chi", SPECS / "table_shifted.json", "--t", "2,2", "--s", "2,2")
    assert json.loads(out)["chi"] == [["1"]]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "multirec", "diagonal", str(SPECS / "scalar_affine.json"),
                           "--t", "0,0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (HERE / "expected" / "diagonal_scalar_affine.json").read_text()
