import pytest

from graphbrain import canon, graphs as gk


@pytest.fixture(scope="session")
def connected_upto7():
    return [g for n in range(1, 8) for g in canon.enumerate_connected(n)]


@pytest.fixture(scope="session")
def all_upto6():
    return [g for n in range(1, 7) for g in canon.enumerate_graphs(n)]


@pytest.fixture(scope="session")
def table_graphs():
    return {g.name: g for g in gk.table_graphs()}
