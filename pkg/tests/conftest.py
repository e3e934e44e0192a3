import sys
from collections import defaultdict
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

_criteria = {}
_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid in _criteria and (report.when == "call" or report.failed):
        _outcomes[_criteria[report.nodeid]].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), results in sorted(_outcomes.items()):
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n} ({title}): {status}")


@pytest.fixture
def fixtures_dir():
    return FIXTURES
