import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mukai_kit.lattice import MukaiVector, NSLattice

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def full_gram(L):
    """Gram matrix of Z + NS + Z with the Mukai form, built entry by entry."""
    n = L.rank + 2
    M = [[0] * n for _ in range(n)]
    M[0][n - 1] = M[n - 1][0] = -1
    for i in range(L.rank):
        for j in range(L.rank):
            M[i + 1][j + 1] = L.gram[i][j]
    return M


def mukai_form(x, y, L):
    M = full_gram(L)
    cx, cy = x.coords, y.coords
    return sum(cx[i] * M[i][j] * cy[j] for i in range(len(cx)) for j in range(len(cy)))


def random_lattice(rng: random.Random, max_rank=3, bound=8):
    n = rng.randint(1, max_rank)
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = 2 * rng.randint(-bound // 2, bound // 2)
        for j in range(i + 1, n):
            G[i][j] = G[j][i] = rng.randint(-bound, bound)
    return NSLattice(tuple(map(tuple, G)), tuple(f"e{i}" for i in range(n)))


def random_vector(rng: random.Random, L, bound=9):
    return MukaiVector(rng.randint(-bound, bound), tuple(rng.randint(-bound, bound) for _ in range(L.rank)),
                       rng.randint(-bound, bound))


@st.composite
def lattices(draw, max_rank=3, bound=8):
    n = draw(st.integers(1, max_rank))
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = 2 * draw(st.integers(-bound // 2, bound // 2))
        for j in range(i + 1, n):
            G[i][j] = G[j][i] = draw(st.integers(-bound, bound))
    return NSLattice(tuple(map(tuple, G)), tuple(f"e{i}" for i in range(n)))


def vectors(L, bound=20):
    ints = st.integers(-bound, bound)
    return st.builds(MukaiVector, ints, st.tuples(*[ints] * L.rank), ints)


@pytest.fixture
def h2():
    return NSLattice.rank_one(2)


@pytest.fixture
def elliptic():
    return NSLattice(((-2, 1), (1, 0)), ("C", "f"))
