"""Shared fixtures plus a terminal summary of the acceptance criteria."""

from __future__ import annotations

import re

CRITERION_PATTERN = re.compile(r"test_acceptance\.py::test_c(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, ()):
            match = CRITERION_PATTERN.search(getattr(report, "nodeid", ""))
            if match:
                number = int(match.group(1))
                label = match.group(2).replace("_", " ")
                status = "PASS" if outcome == "passed" else "FAIL"
                lines.append((number, f"criterion {number:2d} [{status}] {label}"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
