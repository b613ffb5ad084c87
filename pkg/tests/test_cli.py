import json
from fractions import Fraction

import pytest

from shiftcpd.cli import main

BERGMAN_TEXT = """\
(k,2m)-PD cutoffs p(2,k,m)
k\\m      0      1      2      3      4      5
  1    4/3    3/2
  2    9/8    8/7    5/4
  3  16/15  15/14  12/11    7/6
  4  25/24  24/23  21/20  16/15    9/8
  5  36/35  35/34  32/31  27/26  20/19  11/10
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cutoff_single_cell(capsys):
    code, out, _ = run(capsys, "cutoff", "--j", "2", "--k", "4", "--m", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["closed_form"] == doc["determinant_ratio"] == doc["c"] == "16/15"
    assert doc["contractivity_index"] == 15
    assert doc["agree"] is True
    lo, hi = (Fraction(doc["bisection"][s]) for s in ("lo", "hi"))
    assert lo <= Fraction(16, 15) < hi


def test_cutoff_text(capsys):
    code, out, _ = run(capsys, "cutoff", "--j", "2", "--k", "4", "--m", "3")
    assert code == 0
    assert "closed_form         16/15" in out
    assert "contractivity_index 15" in out


def test_cutoff_grid_is_bergman_table(capsys):
    code, out, _ = run(capsys, "cutoff", "--j", "2", "--grid", "--kmax", "5")
    assert code == 0
    assert out == BERGMAN_TEXT


def test_cutoff_alternating(capsys):
    code, out, _ = run(capsys, "cutoff", "--alternating", "--j", "2", "--m", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["alternating_cutoff"] == "7/6" and doc["contractivity_index"] == 6


def test_cutoff_usage_errors(capsys):
    assert run(capsys, "cutoff", "--j", "2", "--k", "1", "--m", "5")[0] == 2
    assert run(capsys, "cutoff", "--k", "1", "--m", "0")[0] == 2
    assert run(capsys, "cutoff", "--j", "two")[0] == 2
    assert run(capsys)[0] == 2


def test_analyze_agler(capsys):
    code, out, _ = run(capsys, "analyze", "--shift", "agler:2", "--kmax", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"spec", "config", "grid", "ladders", "mid", "warnings"}
    assert len(doc["grid"]) == 20
    assert all(c["pd"]["status"] == c["cpd"]["status"] == "holds" for c in doc["grid"])
    assert doc["mid"]["overall"]["status"] in ("holds", "boundary")
    assert [e["n"] for e in doc["ladders"]["contractive"]] == list(range(1, 11))


def test_analyze_perturbed(capsys):
    code, out, _ = run(capsys, "analyze", "--shift", "agler-perturbed:2:x=9/8", "--kmax", "3", "--format", "json")
    cells = {(c["k"], c["m"]): c for c in json.loads(out)["grid"]}
    assert code == 0
    assert cells[2, 0]["pd"]["status"] == "boundary" and cells[2, 0]["cutoff"] == "9/8"
    assert cells[3, 0]["pd"]["status"] == "fails"
    assert cells[3, 0]["pd"]["witness"]["i"] == 0


def test_analyze_flat_text(capsys):
    code, out, _ = run(capsys, "analyze", "--shift", "explicit:[1,1,1]", "--kmax", "2")
    assert code == 0
    assert "  1  ==  =+" in out
    assert "MID: boundary" in out


def test_analyze_pipeline(capsys):
    a = run(capsys, "analyze", "--pipeline", "agler:2|aluthge|restrict:1", "--kmax", "2", "--format", "json")[1]
    b = run(capsys, "analyze", "--shift", "agler:2", "--pipeline", "aluthge|restrict:1", "--kmax", "2", "--format", "json")[1]
    assert a == b
    assert json.loads(a)["spec"] == "agler:2|aluthge|restrict:1"


def test_analyze_is_byte_deterministic(capsys):
    args = ("analyze", "--shift", "agler-perturbed:3:x=5/4", "--kmax", "4", "--format", "json")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    assert run(capsys, *args, "--jobs", "2")[1] == first


def test_analyze_parse_errors(capsys):
    code, _, err = run(capsys, "analyze", "--shift", "agler-perturbed:2:x=1.5")
    assert code == 2 and "position 20" in err
    assert run(capsys, "analyze")[0] == 2
    assert run(capsys, "analyze", "--shift", "agler:2", "--kmax", "0")[0] == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"shift": "agler:3", "kmax": 2, "format": "json", "tolerance-digits": 10}))
    doc = json.loads(run(capsys, "analyze", "--config", str(cfg))[1])
    assert doc["spec"] == "agler:3" and doc["config"]["kmax"] == 2 and doc["config"]["tolerance_digits"] == 10
    doc = json.loads(run(capsys, "analyze", "--config", str(cfg), "--kmax", "3")[1])
    assert doc["config"]["kmax"] == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "analyze", "--config", str(bad))[0] == 2
    assert run(capsys, "analyze", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_high_precision_logs(capsys):
    code, out, _ = run(capsys, "analyze", "--shift", "agler:2", "--kmax", "2", "--tolerance-digits", "20", "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["tolerance_digits"] == 20
