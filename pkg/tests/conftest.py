import numpy as np
import pytest

from macrorealism.search import maximize_gap


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def search64():
    """The 64-restart search is the slowest call in the suite; run it once."""
    return maximize_gap(restarts=64, seed=0)
