import math

import pytest

from wignerbs.fock import fock_state, superposition
from wignerbs.phase_space import PhaseSpaceGrid


@pytest.fixture(scope="session")
def grid():
    """Default grid for n_cut = 40."""
    return PhaseSpaceGrid.default(40)


@pytest.fixture(scope="session")
def grid9():
    return PhaseSpaceGrid(9.0, 256)


@pytest.fixture(scope="session")
def small_grid():
    return PhaseSpaceGrid(7.0, 64)


@pytest.fixture(scope="session")
def focks():
    return [fock_state(n, 40) for n in range(5)]


@pytest.fixture(scope="session")
def fig4():
    return superposition([(1, 0), (-1, 1), (1j, 2)], 40)


LN_PI = math.log(math.pi)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
