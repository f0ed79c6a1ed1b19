import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    parser.addoption("--prop-seed", type=int, default=20261015, help="seed for the property suites")
    parser.addoption("--prop-cases", type=int, default=200, help="cases per property (at least 200)")


@pytest.fixture
def prop_seed(request):
    return request.config.getoption("--prop-seed")


@pytest.fixture
def prop_cases(request):
    return max(200, request.config.getoption("--prop-cases"))


CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
