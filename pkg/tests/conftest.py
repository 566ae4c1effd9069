import pytest

from ffheights import DrinfeldModule, RatFuncField, field


@pytest.fixture(scope="session")
def K3():
    return RatFuncField(field(3))


@pytest.fixture(scope="session")
def K5():
    return RatFuncField(field(5))


@pytest.fixture(scope="session")
def K2():
    return RatFuncField(field(2))


@pytest.fixture(scope="session")
def K5t():
    return RatFuncField(field(5), "t")


@pytest.fixture(scope="session")
def carlitz3(K3):
    return DrinfeldModule(K3, [K3.one()])


@pytest.fixture(scope="session")
def carlitz5(K5):
    return DrinfeldModule(K5, [K5.one()])


@pytest.fixture(scope="session")
def carlitz2(K2):
    return DrinfeldModule(K2, [K2.one()])
