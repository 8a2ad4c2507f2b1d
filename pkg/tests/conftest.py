import random

import pytest

from lcft.gf import GF


@pytest.fixture
def F2():
    return GF(2)


@pytest.fixture
def F4():
    return GF(2, 2)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(LINES):
            terminalreporter.write_line(LINES[number])
