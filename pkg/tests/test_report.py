import json
from fractions import Fraction as F

from shiftcpd.classify import grid
from shiftcpd.report import cutoff_table, dumps, grid_doc, plain, render_grid, verdict_doc
from shiftcpd.verdicts import Status, Verdict


def test_plain_scalars():
    assert plain(F(6, 4)) == "3/2"
    assert plain(0.1) == "0.10000000000000001"
    assert plain({"a": (F(1), 2)}) == {"a": ["1", 2]}
    assert plain(Status.BOUNDARY) == "boundary"


def test_verdict_doc():
    assert verdict_doc(Verdict(Status.HOLDS, 12)) == {"status": "holds", "depth": 12}
    doc = verdict_doc(Verdict(Status.FAILS, 3, {"i": 0, "value": F(-1, 3)}))
    assert doc == {"status": "fails", "depth": 3, "witness": {"i": 0, "value": "-1/3"}}


def test_dumps_is_sorted_and_stable():
    text = dumps({"b": 1, "a": [F(1, 2)]} | {"a": plain([F(1, 2)])})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
    assert json.loads(text) == {"a": ["1/2"], "b": 1}


def test_grid_doc_schema():
    r = grid("agler-perturbed:2:x=4/3", 2)
    doc = grid_doc(r, {"kmax": 2})
    assert [(c["k"], c["m"]) for c in doc["grid"]] == [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]
    assert doc["grid"][0]["cutoff"] == "4/3" and doc["grid"][0]["pd"]["status"] == "boundary"
    assert set(doc["ladders"]) == {"contractive", "hyponormal"}
    assert set(doc["mid"]) >= {"logcpd", "delta", "log_monotone", "log_alternating", "overall", "contractive"}


def test_render_grid_symbols():
    text = render_grid(grid("agler-perturbed:2:x=9/8", 3, with_mid=False))
    assert "  2    =+ 9/8    ++ 8/7    ++ 5/4" in text
    assert "hyponormal:  1+ 2= 3-" in text


def test_cutoff_table_other_j():
    lines = cutoff_table(3, 2).splitlines()
    assert lines[1].split() == ["1", "3/2", "2"]
    assert lines[2].split() == ["2", "6/5", "5/4", "3/2"]  # n = 10, 8, 4
