import numpy as np
import pytest
from hypothesis import settings, strategies as st

from princerank.core import PowerStructure
from princerank.tactics import DiscretePattern, weight_pattern

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")


def random_column(rng, n, j):
    """Arbitrary signed column with a non-negative self entry and unit L1 norm."""
    col = rng.uniform(-1, 1, n) * (rng.random(n) < 0.7)
    col[j] = abs(col[j]) + 1e-3
    return col / np.abs(col).sum()


def random_structure(rng, n, dead_prob=0.1):
    sizes = rng.uniform(0, 10, n)
    sizes[rng.random(n) < dead_prob] = 0.0
    T = np.column_stack([random_column(rng, n, j) for j in range(n)])
    return PowerStructure(sizes, T)


def random_discrete_structure(rng, n, rho=0.9, sizes=None):
    if sizes is None:
        sizes = rng.uniform(0.2, 5, n)
    cols = []
    for j in range(n):
        signs = [0 if k == j else int(rng.integers(-1, 2)) for k in range(n)]
        cols.append(weight_pattern(DiscretePattern(j, tuple(signs)), rho))
    return PowerStructure(sizes, np.column_stack(cols))


@st.composite
def discrete_structures(draw, min_n=1, max_n=4, rho=0.9):
    n = draw(st.integers(min_n, max_n))
    sizes = draw(st.lists(st.floats(0.1, 5.0), min_size=n, max_size=n))
    cols = []
    for j in range(n):
        signs = tuple(0 if k == j else draw(st.sampled_from((0, 1, -1))) for k in range(n))
        cols.append(weight_pattern(DiscretePattern(j, signs), rho))
    return PowerStructure(np.array(sizes), np.column_stack(cols))


@st.composite
def arbitrary_structures(draw, min_n=1, max_n=4):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(min_n, max_n))
    return random_structure(np.random.default_rng(seed), n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, repeated in the terminal summary so the
# verdicts are visible even when output is captured
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
