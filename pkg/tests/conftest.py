import pytest

from ghzgen import ideal
from ghzgen.histories import HistoryEngine


@pytest.fixture(scope="session")
def engine():
    return HistoryEngine()


@pytest.fixture(scope="session")
def pipeline():
    return ideal.run_pipeline()
