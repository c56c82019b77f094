"""The sixteen acceptance criteria at full level, one test per criterion."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

from k3lab.acceptance import CRITERIA, run_criterion

README = Path(__file__).resolve().parents[1] / "README.md"


def _ids():
    return [f"{k:02d}-{name.replace(' ', '_')}" for k, (name, _) in CRITERIA.items()]


@pytest.mark.parametrize("k", list(CRITERIA), ids=_ids())
def test_criterion(k):
    checks = run_criterion(k, "full")
    assert checks
    failed = [(c.name, c.expected, c.actual) for c in checks if not c.passed]
    assert not failed, failed
    if k == 16:
        text = README.read_text()
        assert "-1296" in text or "−1296" in text
        assert "x4" in text.lower()


def test_unknown_level_is_rejected():
    with pytest.raises(ValueError):
        run_criterion(1, "medium")


if __name__ == "__main__":
    ok = True
    for k, (name, _) in CRITERIA.items():
        checks = run_criterion(k, "full")
        passed = all(c.passed for c in checks)
        ok &= passed
        print(f"criterion {k:2d} {'PASS' if passed else 'FAIL'}  {name}")
    sys.exit(0 if ok else 1)
