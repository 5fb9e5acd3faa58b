import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from relctrl import ArraySpec, build_example

settings.register_profile(
    "numeric",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture(scope="session")
def watertanks():
    return build_example("watertanks")


@pytest.fixture(scope="session")
def watertanks_ring():
    return build_example("watertanks-ring")


@pytest.fixture(scope="session")
def oscillators_a():
    return build_example("oscillators-a")


@pytest.fixture(scope="session")
def oscillators_b():
    return build_example("oscillators-b")


@pytest.fixture(scope="session")
def counterexample():
    return build_example("counterexample-23")


@pytest.fixture(scope="session")
def chain_ring():
    return build_example("integrator-chain-ring")


def random_unit_incidence(rng, q_max=6, p_max=8) -> np.ndarray:
    """Random q x p matrix whose columns are e_i - e_j."""
    q = int(rng.integers(2, q_max + 1))
    p = int(rng.integers(1, p_max + 1))
    G = np.zeros((q, p))
    for s in range(p):
        i, j = rng.choice(q, size=2, replace=False)
        G[i, s] = 1.0
        G[j, s] = -1.0
    return G


def random_array_spec(rng, n_max=3, q_max=4, p_max=5) -> ArraySpec:
    """Random array whose input columns are unit edges times a random vector."""
    n = int(rng.integers(1, n_max + 1))
    q = int(rng.integers(2, q_max + 1))
    p = int(rng.integers(1, p_max + 1))
    A = rng.standard_normal((n, n))
    B = np.zeros((q, p, n))
    for s in range(p):
        i, j = rng.choice(q, size=2, replace=False)
        w = rng.standard_normal(n)
        B[i, s] = w
        B[j, s] = -w
    return ArraySpec(n=n, q=q, p=p, A=A, B=B, name=f"random-{n}-{q}-{p}")


def all_pairs(q):
    return [(k, l) for k in range(1, q + 1) for l in range(1, q + 1) if k != l]
