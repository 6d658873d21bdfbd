import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from snw.digraph import from_edges  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"

# Filled by test_acceptance; printed once at the end of the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def c3():
    return from_edges(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def t3():
    return from_edges(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def c5():
    return from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


@pytest.fixture
def path3():
    return from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def two_c3():
    return from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
