import numpy as np
import pytest

from qslgate.linalg import HermitianOperator2, QubitState

ACCEPTANCE_LINES = []


def random_hermitian(rng, scale=1.0):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return HermitianOperator2(scale * 0.5 * (a + a.conj().T))


def random_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return QubitState.normalized(v[0], v[1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
