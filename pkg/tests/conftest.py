import numpy as np
import pytest

_criteria = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        props = dict(report.user_properties)
        _criteria.append((report.outcome, props.get("criterion", report.nodeid), props.get("metric", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, name, metric in _criteria:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  {metric}".rstrip())


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)

