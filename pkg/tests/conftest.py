import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_series(rng, order, size=1.0):
    """Coefficients uniformly in the disk of radius ``size``."""
    r = size * np.sqrt(rng.random(order + 1))
    return r * np.exp(2j * np.pi * rng.random(order + 1))


def random_unit_series(rng, order):
    c = random_series(rng, order)
    c[0] = 1.0
    return c


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
