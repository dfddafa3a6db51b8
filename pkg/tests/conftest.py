import pytest
from mpmath import mp


@pytest.fixture(scope="session")
def enum_counts():
    """Exhaustive counts for n <= 6, shared across tests."""
    from planardeg.enumoracle import enumerate_all
    return {n: enumerate_all(n) for n in range(2, 7)}


@pytest.fixture(scope="session")
def outer_constants():
    from planardeg.outerplanar import constants_outer
    return constants_outer(30)


@pytest.fixture(scope="session")
def sp_constants():
    from planardeg.seriesparallel import constants_sp
    return constants_sp(30)


@pytest.fixture(scope="session")
def planar_constants():
    from planardeg.planar import constants_planar
    return constants_planar(30)
