"""Collects acceptance-criterion outcomes and prints them after the run."""

from __future__ import annotations

import pytest

_CRITERIA: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, text = marker.args
    status = "PASS" if report.passed else "FAIL"
    _CRITERIA[number] = (status, text, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, text, duration = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  ({duration:.2f} s)  {text}")
