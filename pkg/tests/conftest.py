"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import time

import pytest

_STARTED = time.perf_counter()
_RESULTS: dict = {}
_TITLES: dict = {}
RUNTIME_BUDGET = 60.0


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _TITLES[number] = title
            _RESULTS.setdefault(number, [])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _RESULTS[mark.args[0]].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    elapsed = time.perf_counter() - _STARTED
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        outcomes = _RESULTS[number]
        ok = bool(outcomes) and all(outcomes)
        note = f"{sum(outcomes)}/{len(outcomes)} checks"
        if number == 10:
            ok = ok and elapsed < RUNTIME_BUDGET
            note += f", suite runtime {elapsed:.1f}s (budget {RUNTIME_BUDGET:.0f}s)"
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} [{status}] {_TITLES[number]} ({note})")
