import pytest
from hypothesis import HealthCheck, settings

from perfcone.complexes import build_registry

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def reg2():
    return build_registry(2)


@pytest.fixture(scope="session")
def reg3():
    return build_registry(3)


@pytest.fixture(scope="session")
def reg4():
    return build_registry(4)


@pytest.fixture(scope="session")
def reg5():
    return build_registry(5)
