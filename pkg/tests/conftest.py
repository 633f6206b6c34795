"""Emit one verdict line per acceptance criterion in the terminal summary.

The acceptance tests also print their own PASS lines (visible with -s,
including the measured runtime); this hook makes the verdicts show up in
captured runs like `pytest -v` as well, one line per criterion either way.
"""

import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            m = CRITERION.search(getattr(report, "nodeid", ""))
            if m:
                num, name = int(m.group(1)), m.group(2).replace("_", " ")
                verdict = "PASS" if status == "passed" else "FAIL"
                if outcomes.get(num, (None, "PASS"))[1] != "FAIL":
                    outcomes[num] = (name, verdict)
    if not outcomes:
        return
    terminalreporter.section("acceptance gate")
    for num in sorted(outcomes):
        name, verdict = outcomes[num]
        terminalreporter.write_line(f"[acceptance] criterion {num} ({name}): {verdict}")
