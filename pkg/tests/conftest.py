from __future__ import annotations

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion\[(\d+)-")


def pytest_terminal_summary(terminalreporter):
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m and getattr(rep, "when", "call") in ("call", "setup"):
                k = int(m.group(1))
                if outcomes.get(k) != "FAIL":
                    outcomes[k] = "PASS" if key == "passed" else "FAIL"
    if not outcomes:
        return
    from k3lab.acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for k in sorted(outcomes):
        terminalreporter.write_line(f"criterion {k:2d} {outcomes[k]}  {CRITERIA[k][0]}")
