import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tetrachain.precision import RealCtx, make_constants

settings.register_profile(
    "research",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("research")


@pytest.fixture(scope="session")
def ctx40():
    return RealCtx(digits=40)


@pytest.fixture(scope="session")
def c40(ctx40):
    return make_constants(ctx40)


@pytest.fixture(scope="session")
def ctx60():
    return RealCtx(digits=60)


@pytest.fixture(scope="session")
def c60(ctx60):
    return make_constants(ctx60)


@st.composite
def valid_strings(draw, min_size=1, max_size=12):
    """Reflection strings: letters in 1..4, no two adjacent letters equal."""
    n = draw(st.integers(min_size, max_size))
    first = draw(st.integers(1, 4))
    out = [first]
    for _ in range(n - 1):
        step = draw(st.integers(1, 3))
        out.append((out[-1] - 1 + step) % 4 + 1)
    return tuple(out)


def random_valid_string(rng: random.Random, n: int) -> tuple:
    s = [rng.randrange(1, 5)]
    while len(s) < n:
        s.append((s[-1] - 1 + rng.randrange(1, 4)) % 4 + 1)
    return tuple(s)
