"""Reports with pass/fail checks and their canonical serialization."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .exact import ExactMatrix, MultiQuad, SparsePoly


def to_plain(obj: Any) -> Any:
    """JSON-ready data: exact scalars become strings, never floats."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, MultiQuad):
        return obj.to_json()
    if isinstance(obj, (SparsePoly, ExactMatrix)):
        return obj.to_json() if isinstance(obj, ExactMatrix) else str(obj)
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_plain(v) for v in obj]
        return sorted(items, key=_sort_key) if isinstance(obj, (set, frozenset)) else items
    if dataclasses.is_dataclass(obj):
        return to_plain(dataclasses.asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _sort_key(x):
    return json.dumps(x, sort_keys=True)


@dataclass
class Check:
    name: str
    expected: Any
    actual: Any
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(self.expected == self.actual) or to_plain(self.expected) == to_plain(self.actual)

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "pass": bool(self.passed)}


@dataclass
class Report:
    task: str
    params: dict
    results: Any
    checks: list[Check] = field(default_factory=list)
    version: str = __version__
    # seconds spent computing; never serialized so output bytes stay reproducible
    wall_time: float | None = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "task": self.task,
            "params": self.params,
            "results": self.results,
            "checks": self.checks,
            "pass": self.passed,
            "version": self.version,
        }


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        text = json.dumps(to_plain(report), sort_keys=True, indent=2, ensure_ascii=False)
        return (text + "\n").encode("utf-8")
    if fmt == "text":
        return render_text(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def render_text(report: Report) -> str:
    lines = [f"task: {report.task}"]
    for k, v in sorted(report.params.items()):
        lines.append(f"  {k} = {json.dumps(to_plain(v), sort_keys=True, ensure_ascii=False)}")
    if report.checks:
        width = max(len(c.name) for c in report.checks)
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"{mark}  {c.name.ljust(width)}  actual={json.dumps(to_plain(c.actual), ensure_ascii=False)}")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    lines.append("results:")
    body = json.dumps(to_plain(report.results), sort_keys=True, indent=2, ensure_ascii=False)
    lines.extend("  " + line for line in body.splitlines())
    return "\n".join(lines) + "\n"
