import itertools
import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contigplan import fixtures
from contigplan.complex_core import (
    ComplexError,
    SimplicialMap,
    all_pairs_skeleton_distances,
    boundary_complex,
    build_complex,
    generated_subcomplex,
    simplex_complex,
)
from contigplan.contiguity import (
    ContiguityChain,
    CoverCertificate,
    CoverPart,
    chain_from_rows,
    contiguous,
    is_simplicial,
    map_distance,
    verify_chain,
    verify_cover,
)

from conftest import random_connected_graph
import oracles


def table1(circle_square):
    P, _, _ = circle_square
    J0 = generated_subcomplex(P, fixtures.CIRCLE_PARTS[0])
    return chain_from_rows(J0, fixtures.circle(), fixtures.CIRCLE_CHAINS[0])


def test_is_simplicial_examples(circle_square):
    K = boundary_complex(2)
    assert is_simplicial(SimplicialMap.identity(K))
    assert is_simplicial(table1(circle_square).maps[3])
    solid = simplex_complex(2)
    assert not is_simplicial(SimplicialMap(solid, K, (0, 1, 2)))


def test_contiguous_examples(circle_square):
    K = boundary_complex(2)
    chain = table1(circle_square)
    f = chain.maps
    assert contiguous(f[0], f[0])
    assert contiguous(f[0], f[1])
    assert not contiguous(f[0], f[6])
    assert contiguous(SimplicialMap.constant(K, K, 0), SimplicialMap.constant(K, K, 1))


def test_contiguous_non_simplicial_is_false():
    K = boundary_complex(2)
    solid = simplex_complex(2)
    f = SimplicialMap(solid, K, (0, 1, 2))
    assert not contiguous(f, f)


def test_contiguous_shape_mismatch():
    K = boundary_complex(2)
    with pytest.raises(ComplexError):
        contiguous(SimplicialMap.identity(K), SimplicialMap.identity(simplex_complex(2)))


def test_map_distance_table1(circle_square):
    f = table1(circle_square).maps
    d = all_pairs_skeleton_distances(fixtures.circle())
    assert map_distance(f[0], f[0], d) == 0
    assert map_distance(f[0], f[1], d) == 1
    assert map_distance(f[0], f[6], d) == 6


def test_verify_reference_chains(circle_cover, wedge_cover):
    for cert in (circle_cover, wedge_cover):
        for part in cert.parts:
            res = verify_chain(part.chain, cert.psi.restrict(part.subcomplex), cert.psi_prime.restrict(part.subcomplex))
            assert res, res.diagnostics
    assert len(wedge_cover.parts[2].chain.maps) == 11


def test_verify_chain_swapped_rows(circle_square):
    rows = [list(r) for r in fixtures.CIRCLE_CHAINS[0]]
    rows[2], rows[5] = rows[5], rows[2]
    P, _, _ = circle_square
    J0 = generated_subcomplex(P, fixtures.CIRCLE_PARTS[0])
    chain = chain_from_rows(J0, fixtures.circle(), rows)
    res = verify_chain(chain)
    assert not res
    k, k1 = map(int, re.search(r"maps (\d+) and (\d+)", res.diagnostics[0]).groups())
    assert k1 == k + 1 and 1 <= k <= 5
    assert not contiguous(chain.maps[k], chain.maps[k1])
    assert all(contiguous(chain.maps[i], chain.maps[i + 1]) for i in range(k))


def test_verify_chain_wrong_endpoint(circle_square):
    chain = table1(circle_square)
    res = verify_chain(chain, expected_start=chain.maps[1])
    assert not res and "start" in res.diagnostics[0]


def test_verify_chain_non_simplicial():
    K = boundary_complex(2)
    solid = simplex_complex(2)
    chain = ContiguityChain((SimplicialMap(solid, K, (0, 0, 0)), SimplicialMap(solid, K, (0, 1, 2))))
    res = verify_chain(chain)
    assert not res
    assert "not simplicial" in " ".join(res.diagnostics)


def test_chain_requires_shared_domain():
    K = boundary_complex(2)
    with pytest.raises(ComplexError):
        ContiguityChain(())
    with pytest.raises(ComplexError):
        ContiguityChain((SimplicialMap.identity(K), SimplicialMap.identity(simplex_complex(2))))


def test_verify_cover_examples(circle_cover, wedge_cover):
    assert verify_cover(circle_cover)
    assert verify_cover(wedge_cover)
    assert circle_cover.bound == 1 and wedge_cover.bound == 2
    assert circle_cover.part_sizes() == [10, 8]


def test_verify_cover_missing_facet(circle_cover):
    part = circle_cover.parts[1]
    facets = part.facets[1:]
    J = generated_subcomplex(circle_cover.domain, facets)
    chain = ContiguityChain(tuple(m.restrict(J) for m in part.chain.maps))
    cert = CoverCertificate(circle_cover.domain, circle_cover.psi, circle_cover.psi_prime,
                            (circle_cover.parts[0], CoverPart(facets, chain)))
    res = verify_cover(cert)
    assert not res
    assert "not covered" in " ".join(res.diagnostics)


def test_verify_cover_overlap(circle_cover):
    a, b = circle_cover.parts
    extra = a.facets[0]
    facets = tuple(sorted(b.facets + (extra,)))
    J = generated_subcomplex(circle_cover.domain, facets)
    pi1 = circle_cover.psi.restrict(J)
    pi2 = circle_cover.psi_prime.restrict(J)
    cert = CoverCertificate(circle_cover.domain, circle_cover.psi, circle_cover.psi_prime,
                            (a, CoverPart(facets, ContiguityChain((pi1, pi2)))))
    res = verify_cover(cert)
    assert not res


def test_verify_cover_mutation(wedge_cover):
    part = wedge_cover.parts[0]
    rows = [list(m.assignment) for m in part.chain.maps]
    rows[4][7] = 1
    chain = chain_from_rows(part.subcomplex, wedge_cover.codomain, rows)
    cert = CoverCertificate(wedge_cover.domain, wedge_cover.psi, wedge_cover.psi_prime,
                            (CoverPart(part.facets, chain),) + wedge_cover.parts[1:])
    res = verify_cover(cert)
    assert not res
    assert "part 0" in res.diagnostics[0]


def _self_maps(K):
    return [SimplicialMap(K, K, v) for v in itertools.product(K.vertices, repeat=len(K.vertices))]


def test_circle_contiguity_graph_matches_oracle():
    K = boundary_complex(2)
    maps = _self_maps(K)
    assert len(maps) == 27
    faces_K = oracles.closure(K.facets)
    for f, g in itertools.product(maps, repeat=2):
        expected = oracles.contiguous_all_faces(K.facets, faces_K, f.as_dict(), g.as_dict())
        assert contiguous(f, g) == expected


def test_identity_and_constant_in_different_classes():
    K = boundary_complex(2)
    maps = _self_maps(K)
    index = {m.assignment: k for k, m in enumerate(maps)}
    adj = {k: [j for j, g in enumerate(maps) if contiguous(f, g)] for k, f in enumerate(maps)}
    seen = {index[(0, 1, 2)]}
    stack = list(seen)
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    assert index[(0, 0, 0)] not in seen
    # on the minimal circle even a rotation is too far from the identity
    assert [maps[k].assignment for k in seen] == [(0, 1, 2)]
    assert not oracles.same_class(K.facets, K.facets, {0: 0, 1: 1, 2: 2}, {0: 0, 1: 0, 2: 0})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_contiguity_symmetric_reflexive_and_face_closed(seed):
    rng = random.Random(seed)
    L = build_complex(random_connected_graph(rng, rng.randint(2, 5), rng.randint(0, 3)))
    K = fixtures.wedge()
    f = SimplicialMap(L, K, tuple(rng.choice(K.vertices) for _ in L.vertices))
    g = SimplicialMap(L, K, tuple(rng.choice(K.vertices) for _ in L.vertices))
    assert contiguous(f, g) == contiguous(g, f)
    assert contiguous(f, f) == is_simplicial(f)
    Kf = oracles.closure(K.facets)
    assert contiguous(f, g) == (
        oracles.simplicial(L.facets, Kf, f.as_dict())
        and oracles.simplicial(L.facets, Kf, g.as_dict())
        and oracles.contiguous_all_faces(L.facets, Kf, f.as_dict(), g.as_dict())
    )


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_map_distance_metric(seed):
    rng = random.Random(seed)
    K = build_complex(random_connected_graph(rng, rng.randint(2, 7), rng.randint(0, 4)))
    L = build_complex(random_connected_graph(rng, rng.randint(1, 6), 2))
    d = all_pairs_skeleton_distances(K)
    f, g, h = (SimplicialMap(L, K, tuple(rng.choice(K.vertices) for _ in L.vertices)) for _ in range(3))
    assert map_distance(f, g, d) >= 0
    assert (map_distance(f, g, d) == 0) == (f.assignment == g.assignment)
    assert map_distance(f, g, d) == map_distance(g, f, d)
    assert map_distance(f, h, d) <= map_distance(f, g, d) + map_distance(g, h, d)
    ref = oracles.skeleton_distances(K.facets)
    assert map_distance(f, g, d) == sum(ref[a][b] for a, b in zip(f.assignment, g.assignment))


DOMAINS = [
    [(0, 1), (1, 2), (0, 2)],
    [(0, 1), (1, 2), (2, 3), (0, 3)],
    [(0, 1, 2), (0, 2, 3), (0, 1, 3)],
    [(0, 1, 2), (2, 3)],
]
TARGETS = [[(0, 1), (1, 2), (0, 2)], fixtures.WEDGE_FACETS]


@pytest.mark.parametrize("dom", DOMAINS)
@pytest.mark.parametrize("target", TARGETS)
def test_exact_strict_distance_triangle_inequality(dom, target):
    rng = random.Random(len(dom) * 7 + len(target))
    Kf = oracles.closure(target)
    verts = sorted({v for s in dom for v in s})
    maps = [m for m in oracles.all_maps(verts, {v for s in target for v in s}) if oracles.simplicial(dom, Kf, m)]
    cache = {}

    def sd(a, b):
        key = (tuple(a.values()), tuple(b.values()))
        if key not in cache:
            cache[key] = oracles.strict_distance(dom, target, a, b)
        return cache[key]

    for _ in range(25):
        f, g, h = (rng.choice(maps) for _ in range(3))
        assert sd(f, f) == 0
        assert sd(f, g) == sd(g, f)
        assert sd(f, h) <= sd(f, g) + sd(g, h)
