import numpy as np
import pytest

from steinlab.gridfn import as_grid_function


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_grid(rng, shape, spacing=0.25, signed=True, origin=None):
    vals = rng.normal(size=shape) if signed else rng.random(shape)
    vals = vals * (rng.random(shape) < 0.7)
    if origin is None:
        origin = tuple(-(N // 2) * spacing for N in np.atleast_1d(shape))
    return as_grid_function(vals, spacing, origin)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
