import numpy as np
import pytest

from kldesign import Design, SeededRng


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def design_30x3():
    return Design(SeededRng(2024).generator().random((30, 3)))


def grid_5x5():
    g = np.linspace(0.0, 1.0, 5)
    return Design(np.array([(a, b) for a in g for b in g]))
