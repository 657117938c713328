import pytest

from combtopo.sset import SimplicialComplex

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    return SimplicialComplex.from_facets([(0, 1, 2)])
