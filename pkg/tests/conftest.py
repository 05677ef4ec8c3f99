import numpy as np
import pytest

from clifford_asymptotic.surface import paper_h


@pytest.fixture(scope="session")
def h():
    return paper_h()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
