import numpy as np
import pytest

from voterdisc.graph import RegularGraph, generate_regular

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@pytest.fixture(scope="session")
def k4():
    return RegularGraph.from_edges(4, K4_EDGES)


@pytest.fixture(scope="session")
def rrg1000():
    return generate_regular(1000, 3, 1)


@pytest.fixture(scope="session")
def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return RegularGraph.from_edges(10, outer + spokes + inner)


def z_score(est, exact, se):
    return (est - exact) / se if se > 0 else (0.0 if np.isclose(est, exact) else np.inf)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
