import pytest

from kmint.gcm import validate_gcm
from kmint.hwmodule import LambdaData, ModuleTruncation

A2 = [[2, -1], [-1, 2]]
AFF = [[2, -2], [-2, 2]]
HYP = [[2, -3], [-3, 2]]


@pytest.fixture(scope="session")
def cm_a2():
    return validate_gcm(A2)


@pytest.fixture(scope="session")
def cm_aff():
    return validate_gcm(AFF)


@pytest.fixture(scope="session")
def cm_hyp():
    return validate_gcm(HYP)


@pytest.fixture(scope="session")
def cm_sl2():
    return validate_gcm([[2]])


# Shared truncations: session-scoped because materialization only grows
# them, which never invalidates earlier results.

@pytest.fixture(scope="session")
def trunc_a2(cm_a2):
    return ModuleTruncation(cm_a2, LambdaData((1, 1)))


@pytest.fixture(scope="session")
def trunc_aff(cm_aff):
    return ModuleTruncation(cm_aff, LambdaData((1, 1)))


@pytest.fixture(scope="session")
def trunc_hyp(cm_hyp):
    return ModuleTruncation(cm_hyp, LambdaData((1, 1)))


@pytest.fixture(scope="session")
def trunc_sl2_n2(cm_sl2):
    return ModuleTruncation(cm_sl2, LambdaData((2,)))
