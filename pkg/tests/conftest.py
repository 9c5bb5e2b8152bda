import os

import pytest

LONG = os.environ.get("P1STATS_LONG") == "1"

long_running = pytest.mark.skipif(not LONG, reason="set P1STATS_LONG=1 to run")

_criteria: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        detail = dict(report.user_properties).get("detail", "")
        _criteria.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _criteria:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}: {detail}")
