import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from armetro.transactions import TransactionDB  # noqa: E402
from oracles import DB4, oracle_graph  # noqa: E402


@pytest.fixture
def db4():
    return TransactionDB.from_iterable(DB4)


@pytest.fixture(scope="session")
def ograph():
    return oracle_graph()


@pytest.fixture
def weather_path():
    return Path(__file__).parents[1] / "src" / "armetro" / "data" / "weather.csv"


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
