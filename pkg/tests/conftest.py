import numpy as np
import pytest

from qlevy.algebra import AlgebraCtx


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def su2():
    return AlgebraCtx(2, "SUq")


@pytest.fixture(scope="session")
def su3():
    return AlgebraCtx(3, "SUq")


# one pass/fail line per acceptance criterion, printed at the end of the run
_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(number: int, title: str, passed: bool, detail: str) -> bool:
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
