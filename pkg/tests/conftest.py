import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("ci")


@pytest.fixture(scope="session")
def ex1_spec():
    from perturbkit.corpus import ex1_spec as build

    return build()


@pytest.fixture(scope="session")
def ex2_pair():
    from perturbkit.corpus import ex2_dual_pair

    return ex2_dual_pair()


@pytest.fixture(scope="session")
def ex4_pair():
    from perturbkit.corpus import ex4_dual_pair

    return ex4_dual_pair()
