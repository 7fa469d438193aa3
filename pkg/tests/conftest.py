import pytest

from chaoslab import dendrite_d as dd
from chaoslab.core_words import naturals, p_star
from chaoslab.mixing_tower import Tower, seed


@pytest.fixture(scope="session")
def grid():
    return dd.build_grid()


@pytest.fixture(scope="session")
def pstar():
    return p_star()


@pytest.fixture(scope="session")
def nat():
    return naturals()


@pytest.fixture(scope="session")
def tower():
    return Tower(seed())


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
