from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from k3lab.cli import main

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("K3LAB_UPDATE_GOLDEN") == "1"

GOLDEN_CASES = {
    "buchi_minors_5": ["buchi", "minors", "--n", "5", "--all"],
    "buchi_x4": ["buchi", "x4"],
    "buchi_family": ["buchi", "family", "--alpha", "1/3"],
    "kummer_graph": ["kummer", "graph", "--t", "-1", "--s", "1"],
    "kummer_locus": ["kummer", "locus", "--t", "-1", "--s", "1"],
    "kummer_sections": ["kummer", "sections"],
    "lattice_invariants": ["lattice", "invariants"],
    "lattice_shioda_tate": ["lattice", "shioda-tate", "--rho", "19", "--fibers", "4I4+4I2"],
    "arith_count_13": ["arith", "count-x", "--p", "13", "--method", "both"],
    "arith_k4": ["arith", "k4"],
}


def run(argv, capsysbinary):
    code = main(argv)
    out = capsysbinary.readouterr().out
    return code, out


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_output(name, capsysbinary):
    code, out = run(GOLDEN_CASES[name], capsysbinary)
    assert code == 0
    path = GOLDEN / f"{name}.json"
    if UPDATE or not path.exists():
        GOLDEN.mkdir(exist_ok=True)
        path.write_bytes(out)
    assert out == path.read_bytes()


def test_output_is_deterministic(capsysbinary):
    argv = ["lattice", "mw", "--fibration", "minus"]
    first = run(argv, capsysbinary)
    second = run(argv + ["--threads", "4"], capsysbinary)
    assert first == second
    assert first[0] == 0


def test_json_report_shape(capsysbinary):
    code, out = run(["arith", "galois"], capsysbinary)
    body = json.loads(out)
    assert code == 0
    assert set(body) == {"task", "params", "results", "checks", "pass", "version"}
    assert all({"name", "expected", "actual", "pass"} <= set(c) for c in body["checks"])


def test_text_format_and_json_file(tmp_path, capsysbinary):
    target = tmp_path / "report.json"
    code, out = run(["--format", "text", "buchi", "x4", "--json", str(target)], capsysbinary)
    assert code == 0
    assert b"overall: PASS" in out
    assert json.loads(target.read_bytes())["results"]["verdict"] == "fails"


@pytest.mark.parametrize(
    "argv",
    [
        ["nosuch"],
        ["buchi", "minors"],
        ["buchi", "system", "--n", "2"],
        ["arith", "count-x", "--p", "4"],
        ["lattice", "invariants", "--name", "F4"],
        ["--threads", "0", "arith", "k4"],
        ["kummer", "lines", "--t", "1", "--s", "1"],
    ],
)
def test_usage_errors_exit_two(argv, capsysbinary):
    code, _ = run(argv, capsysbinary)
    assert code == 2


def test_help_exits_zero(capsysbinary):
    assert run(["--help"], capsysbinary)[0] == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "k3lab.cli", "arith", "k4"], capture_output=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
