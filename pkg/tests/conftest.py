import hypothesis
import pytest

from domineering.knowledge import saturate
from domineering.seeds import default_knowledge_base
from domineering.solver import Solver
from domineering.strategy import StrategyBuilder

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def solver():
    """One shared solver so transposition and value caches accumulate."""
    return Solver()


@pytest.fixture(scope="session")
def kb():
    base = default_knowledge_base()
    saturate(base)
    return base


@pytest.fixture(scope="session")
def builder(kb, solver):
    return StrategyBuilder(kb, solver)
