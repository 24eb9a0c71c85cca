import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_outcomes: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): one acceptance criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if report.failed:
        _outcomes[label] = "FAIL"
    elif report.when == "call" and label not in _outcomes:
        _outcomes[label] = "SKIP" if report.skipped else "PASS"
    elif report.skipped and label not in _outcomes:
        _outcomes[label] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _outcomes.items():
        terminalreporter.write_line(f"{status}  {label}")
