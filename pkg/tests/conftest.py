import math

import pytest

from deltatrap.spectrum import TrapConfig
from deltatrap.wavepacket import InitialState, project_initial

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def packet_05():
    """gamma = 0.5, rho = 6 (the reference parameter set)."""
    return project_initial(TrapConfig(0.5), InitialState(6.0))


@pytest.fixture(scope="session")
def packet_free():
    return project_initial(TrapConfig(0.0), InitialState(6.0))


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one (criterion, passed, detail) line per acceptance criterion."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        tr.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")


TWO_PI = 2.0 * math.pi
