"""Runs the acceptance module last and prints one PASS/FAIL line per criterion."""

import re

from helpers import ACCEPTANCE_NOTES

_OUTCOMES: dict[int, str] = {}


def pytest_collection_modifyitems(items):
    # the size-bound criterion audits every coreset built earlier in the session
    items.sort(key=lambda item: "test_acceptance.py" in item.nodeid)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.failed:
        _OUTCOMES[n] = "FAIL"
    elif report.skipped:
        _OUTCOMES.setdefault(n, "SKIP")
    elif report.when == "call":
        _OUTCOMES.setdefault(n, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        note = ACCEPTANCE_NOTES.get(n, "")
        terminalreporter.write_line(f"criterion {n:2d}: {_OUTCOMES[n]}  {note}".rstrip())
