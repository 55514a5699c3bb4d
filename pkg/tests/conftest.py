from pathlib import Path

import numpy as np
import pytest

from tpsolver import read_instance

DATA = Path(__file__).parent / "data"

# filled by test_acceptance.py, printed once at the end of the session
ACCEPTANCE_LINES: list[str] = []


def load_matrix(name: str) -> np.ndarray:
    return np.loadtxt(DATA / name, dtype=np.int64, comments="#", ndmin=2)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def table1():
    return read_instance(DATA / "table1.txt")


@pytest.fixture(scope="session")
def table2():
    return load_matrix("table2.txt")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
