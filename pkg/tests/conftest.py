import pytest

from aitax import (
    regime_a_economy,
    regime_b_economy,
    solve_steady_state,
    symmetric_economy,
)


@pytest.fixture(scope="session")
def symmetric_solution():
    return solve_steady_state(symmetric_economy())


@pytest.fixture(scope="session")
def regime_a_solution():
    return solve_steady_state(regime_a_economy())


@pytest.fixture(scope="session")
def regime_b_solution():
    return solve_steady_state(regime_b_economy())
