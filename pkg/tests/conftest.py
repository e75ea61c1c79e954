import pytest

from gmtwist.construct import (
    Parameters,
    canonical_grassmann,
    standard_polarity,
    switching_partition,
)
from gmtwist.graph import gm_switch


@pytest.fixture(scope="session")
def params22():
    return Parameters(2, 2)


@pytest.fixture(scope="session")
def sigma22(params22):
    return standard_polarity(params22)


@pytest.fixture(scope="session")
def G22(params22):
    return canonical_grassmann(params22)


@pytest.fixture(scope="session")
def info22(params22, sigma22):
    return switching_partition(params22, sigma22)


@pytest.fixture(scope="session")
def switched22(G22, info22):
    return gm_switch(G22, info22.partition)
