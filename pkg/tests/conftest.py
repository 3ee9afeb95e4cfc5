from __future__ import annotations

import pytest

from fbcinv.hnn import HnnGroup
from fbcinv.corpus import named

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def g3():
    return HnnGroup(named("g3"))


@pytest.fixture(scope="session")
def id2():
    return HnnGroup(named("id2"))


@pytest.fixture(scope="session")
def ba():
    return HnnGroup(named("ba"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
