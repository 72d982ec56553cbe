import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oscnet.gaussian import QuadraticHamiltonian  # noqa: E402


def random_hamiltonian(rng, n, coupling=0.3):
    """Random stable Hamiltonian with mixed masses."""
    a = rng.normal(size=(n, n))
    v = np.eye(n) * (1.0 + rng.random(n)) + coupling * (a + a.T) / np.sqrt(2 * n)
    lo = np.linalg.eigvalsh(v)[0]
    if lo < 0.2:
        v += (0.2 - lo) * np.eye(n)
    return QuadraticHamiltonian(v, 0.5 + rng.random(n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pair():
    return QuadraticHamiltonian([[1.0, 0.5], [0.5, 1.0]])


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line and fail the test when the criterion fails."""

    def record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} -- {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
