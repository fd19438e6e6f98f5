import numpy as np
import pytest

from betamatte.core import BACKGROUND, FOREGROUND, UNKNOWN

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_trimap(rng, h, w, p_known=0.3):
    """Random labels with at least one pixel of each of F and B."""
    t = np.full((h, w), UNKNOWN, dtype=np.int8)
    known = rng.random((h, w)) < p_known
    t[known] = np.where(rng.random(known.sum()) < 0.5, FOREGROUND, BACKGROUND)
    t[0, 0], t[-1, -1] = FOREGROUND, BACKGROUND
    return t


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
