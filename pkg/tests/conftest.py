import numpy as np
import pytest

from tomoml import ObjectiveContext, counterexample_spec

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def cex():
    spec = counterexample_spec()
    return ObjectiveContext(spec.povm, spec.dataset)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
