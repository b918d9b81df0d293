import numpy as np
import pytest

from cyclefactor.graph import OrientedGraph


@pytest.fixture
def cyclic_triangle():
    return OrientedGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def transitive4():
    return OrientedGraph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}  ({duration:.1f} s)")
