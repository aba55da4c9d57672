import pytest
from hypothesis import HealthCheck, settings

from complexopt.complexity import ComplexityCache

settings.register_profile(
    "ci",
    max_examples=60,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def cache():
    """One shared in-memory complexity memo for the whole run."""
    return ComplexityCache()
