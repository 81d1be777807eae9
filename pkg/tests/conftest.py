import numpy as np
import pytest

from awgnshape.constellation import make_constellation, normalize_unit_energy


@pytest.fixture(scope="session")
def qam16():
    """16-QAM with unit energy under the uniform distribution."""
    return normalize_unit_energy(make_constellation("qam", 16))


@pytest.fixture(scope="session")
def pam8():
    return normalize_unit_energy(make_constellation("pam", 8))


@pytest.fixture(scope="session")
def pam2():
    return make_constellation("pam", 2)


def random_stochastic(rng, n, k, sparsity=0.0):
    W = rng.random((n, k))
    if sparsity:
        W[rng.random((n, k)) < sparsity] = 0.0
        W[np.arange(n), rng.integers(0, k, n)] += 0.1
    return W / W.sum(axis=1, keepdims=True)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def _report(criterion: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
