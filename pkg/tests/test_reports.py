from __future__ import annotations

import json
from fractions import Fraction

import pytest

from k3lab.exact import ExactMatrix, sqrt
from k3lab.reports import Check, Report, emit, render_text, to_plain


def test_to_plain_keeps_values_exact():
    data = {"q": Fraction(3, 4), "n": 5, "r": sqrt(2), "m": ExactMatrix([[1, 2], [3, 4]]), "s": {2, 1}}
    plain = to_plain(data)
    assert plain["q"] == "3/4" and plain["n"] == 5
    assert plain["r"] == {"d": [2], "coords": ["0", "1"]}
    assert plain["s"] == [1, 2]
    json.dumps(plain)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        to_plain({"x": 0.5})


def test_check_compares_exact_and_serialized_forms():
    assert Check("int vs fraction", 1, Fraction(1)).passed
    assert not Check("different", 1, 2).passed
    assert Check("forced", 1, 2, passed=True).passed


def test_emit_is_canonical():
    report = Report("demo", {"b": 1, "a": 2}, {"z": [Fraction(1, 2)]}, [Check("c", 1, 1)])
    out = emit(report)
    assert out.endswith(b"\n")
    body = json.loads(out)
    assert body["pass"] is True and body["task"] == "demo"
    assert list(body) == sorted(body)
    assert emit(report) == out
    with pytest.raises(ValueError):
        emit(report, "yaml")
    timed = Report("demo", {"b": 1, "a": 2}, {"z": [Fraction(1, 2)]}, [Check("c", 1, 1)], wall_time=1.5)
    assert emit(timed) == out and timed == report


def test_text_rendering():
    report = Report("demo", {"p": 7}, {}, [Check("ok", 1, 1), Check("bad", 1, 2)])
    text = render_text(report)
    assert "PASS  ok" in text and "FAIL  bad" in text
    assert "overall: FAIL" in text
