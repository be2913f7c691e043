import random

import pytest
from hypothesis import strategies as st

from contigplan.complex_core import build_complex, ordered_product, projections
from contigplan import fixtures


@st.composite
def small_complexes(draw, max_vertices=6, max_dim=2, max_facets=5):
    """Facet lists on ``0..n-1`` with every label used."""
    n = draw(st.integers(1, max_vertices))
    count = draw(st.integers(1, max_facets))
    facets = []
    for _ in range(count):
        size = draw(st.integers(1, min(n, max_dim + 1)))
        facets.append(sorted(draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))))
    used = {v for f in facets for v in f}
    facets += [[v] for v in range(n) if v not in used]
    return facets


def random_connected_graph(rng: random.Random, n: int, extra: int) -> list[list[int]]:
    """A spanning tree on ``0..n-1`` plus ``extra`` random edges."""
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    for _ in range(extra if n > 1 else 0):
        u, v = sorted(rng.sample(range(n), 2))
        edges.add((u, v))
    return [list(e) for e in sorted(edges)] or [[0]]


@pytest.fixture(scope="session")
def circle():
    return fixtures.circle()


@pytest.fixture(scope="session")
def circle_square(circle):
    P = ordered_product(circle, circle)
    pi1, pi2 = projections(P)
    return P, pi1, pi2


@pytest.fixture(scope="session")
def circle_cover():
    return fixtures.circle_cover()


@pytest.fixture(scope="session")
def wedge_cover():
    return fixtures.wedge_cover()


@pytest.fixture
def triangle_boundary():
    return build_complex([[0, 1], [1, 2], [0, 2]])
