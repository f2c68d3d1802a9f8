import numpy as np
import pytest

from qclab.grid import DiscGrid, SquareGrid


@pytest.fixture(scope="session")
def disc():
    return DiscGrid(128, 256)


@pytest.fixture(scope="session")
def small_disc():
    return DiscGrid(64, 128)


@pytest.fixture(scope="session")
def square():
    return SquareGrid(2.0, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_configure(config):
    config.acceptance_lines = {}


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Mapping criterion number -> summary line, printed after the run."""
    return request.config.acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", {})
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
