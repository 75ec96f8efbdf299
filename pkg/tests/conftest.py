"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""

from collections import defaultdict

import pytest

_RESULTS: dict[int, dict] = defaultdict(lambda: {"title": "", "passed": True, "details": []})


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    # setup and teardown only matter when they fail
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    entry = _RESULTS[number]
    entry["title"] = title
    entry["passed"] &= report.passed
    entry["details"].extend(str(v) for k, v in item.user_properties if k == "detail" and report.when == "call")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        line = f"[{'PASS' if entry['passed'] else 'FAIL'}] criterion {number:>2}: {entry['title']}"
        if entry["details"]:
            line += f"  ({'; '.join(entry['details'])})"
        terminalreporter.write_line(line)
