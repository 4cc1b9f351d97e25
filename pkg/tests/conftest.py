import numpy as np
import pytest
from hypothesis import settings

from qwit.optimal_qubit import optimal_pair

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20091030)


@pytest.fixture(scope="session")
def opt_pair():
    return optimal_pair()


def random_hermitian(rng, n, scale=1.0):
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (G + G.conj().T) / 2


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    G = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return G @ G.conj().T


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
