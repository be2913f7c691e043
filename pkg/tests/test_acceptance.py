"""Acceptance gate: one PASS/FAIL line per criterion, then the assertion."""

import itertools
import random
import time
from fractions import Fraction

import pytest

from contigplan import fixtures
from contigplan.cli import main
from contigplan.complex_core import (
    SimplicialMap,
    barycentric_subdivision,
    boundary_complex,
    build_complex,
    euler_characteristic,
    ordered_product,
    projections,
    all_pairs_skeleton_distances,
)
from contigplan.contiguity import contiguous, is_simplicial, map_distance, verify_chain, verify_cover
from contigplan.covering import run_optimized_covering
from contigplan.formats import read_json
from contigplan.planner import (
    BarycentricPoint,
    PlannerSystem,
    SubdivisionTower,
    estimate_distance_subdivided,
    plan_path,
)
from contigplan.search import SearchParams, local_search, reduce, reduce_to_fixpoint

from conftest import random_connected_graph
import oracles


@pytest.fixture
def report(request):
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(n, ok, detail):
        line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}"
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)
        return ok

    return emit


def test_1_fixture_covers_verify(report):
    t0 = time.perf_counter()
    circle = verify_cover(fixtures.circle_cover())
    wedge = verify_cover(fixtures.wedge_cover())
    elapsed = time.perf_counter() - t0
    sizes = [fixtures.circle_cover().part_sizes(), fixtures.wedge_cover().part_sizes()]
    ok = bool(circle) and bool(wedge) and elapsed < 1.0
    assert report(1, ok, f"circle parts {sizes[0]}, wedge parts {sizes[1]}, {elapsed:.3f} s")


def _estimate(tmp_path, capsys, complex_name, seed, M, t):
    out = tmp_path / f"{complex_name}-{seed}"
    code = main(["estimate", "sc", f"fixture:{complex_name}", "--M", str(M), "--r", "0.1", "--t", str(t),
                 "--seeds", str(seed), "--out", str(out)])
    capsys.readouterr()
    rep = read_json(out / "report.json")
    assert main(["verify", "cover", str(out / "cover.json")]) == 0
    capsys.readouterr()
    return code, rep


def test_2_circle_reproduction(tmp_path, capsys, report):
    runs = []
    for seed in range(1, 6):
        code, rep = _estimate(tmp_path, capsys, "circle", seed, 1000, 2)
        runs.append((seed, rep["bound"], rep["elapsed_ms"] / 1000))
    hits = sum(b == 1 for _, b, _ in runs)
    slowest = max(s for _, _, s in runs)
    ok = hits >= 3 and slowest < 600
    detail = f"{hits}/5 seeds reach bound 1, slowest {slowest:.1f} s; " + ", ".join(
        f"seed {s}: {b}" for s, b, _ in runs)
    assert report(2, ok, detail)


def test_3_wedge_reproduction(tmp_path, capsys, report):
    t0 = time.perf_counter()
    runs = []
    # seeds run in order; the first verified 3-part cover settles the criterion
    for seed in range(1, 6):
        code, rep = _estimate(tmp_path, capsys, "wedge", seed, 5000, 3)
        runs.append((seed, rep["part_sizes"]))
        if rep["bound"] == 2:
            break
    total = time.perf_counter() - t0
    ok = runs[-1][1] is not None and len(runs[-1][1]) == 3 and total < 90 * 60
    detail = f"{', '.join(f'seed {s}: {p}' for s, p in runs)}; {total:.0f} s total"
    assert report(3, ok, detail)


def test_4_oracle_equivalence(report):
    K = boundary_complex(2)
    Kf = oracles.closure(K.facets)
    maps = [SimplicialMap(K, K, a) for a in itertools.product(range(3), repeat=3)]
    mismatches = 0
    for f, g in itertools.product(maps, repeat=2):
        mismatches += contiguous(f, g) != oracles.contiguous(K.facets, Kf, f.as_dict(), g.as_dict())
    ident, const = SimplicialMap.identity(K), SimplicialMap.constant(K, K, 0)
    separated = not oracles.same_class(K.facets, K.facets, ident.as_dict(), const.as_dict())
    found = local_search(ident, const, SearchParams(M=10**5), random.Random(1))
    ok = mismatches == 0 and separated and found is None
    assert report(4, ok, f"{len(maps) ** 2} pairs, {mismatches} mismatches; search at M=1e5 found "
                         f"{'nothing' if found is None else 'a chain'}")


def test_5_property_spot_checks(report):
    rng = random.Random(2024)
    failures = []

    # emitted chains and covers verify, covers are exact partitions
    for _ in range(10):
        L = build_complex(random_connected_graph(rng, rng.randint(2, 6), rng.randint(0, 3)))
        Kc = build_complex(random_connected_graph(rng, rng.randint(2, 5), rng.randint(0, 3)))

        def smap():
            while True:
                f = SimplicialMap(L, Kc, tuple(rng.choice(Kc.vertices) for _ in L.vertices))
                if is_simplicial(f):
                    return f

        f, g = smap(), smap()
        chain = local_search(f, g, SearchParams(M=300), rng)
        if chain is not None:
            red = reduce(chain)
            fixed, _ = reduce_to_fixpoint(chain)
            if not (verify_chain(chain, f, g) and verify_chain(red, f, g) and red.length <= chain.length
                    and verify_chain(fixed, f, g)):
                failures.append("chain")
        cert = run_optimized_covering(f, g, SearchParams(M=200, N=10, t=1, seed=rng.randrange(10**6))).certificate
        if not verify_cover(cert) or sorted(x for p in cert.parts for x in p.facets) != sorted(L.facets):
            failures.append("cover")

    # map_distance metric axioms
    K = fixtures.wedge()
    dist = all_pairs_skeleton_distances(K)
    maps = [SimplicialMap(K, K, a) for a in itertools.product(K.vertices, repeat=4)]
    maps = [m for m in maps if is_simplicial(m)]
    for _ in range(200):
        f, g, h = (rng.choice(maps) for _ in range(3))
        d = lambda a, b: map_distance(a, b, dist)  # noqa: E731
        if d(f, f) != 0 or d(f, g) != d(g, f) or d(f, h) > d(f, g) + d(g, h) or (f != g and d(f, g) == 0):
            failures.append("metric")

    # product facet counts and Euler characteristic
    for _ in range(10):
        A = build_complex(random_connected_graph(rng, rng.randint(1, 6), rng.randint(0, 3)))
        B = build_complex(random_connected_graph(rng, rng.randint(1, 4), rng.randint(0, 2)))
        if len(ordered_product(A, B).facets) != len(oracles.product_facets(A.facets, B.facets)):
            failures.append("product")
        if euler_characteristic(barycentric_subdivision(A).complex) != oracles.euler(A.facets):
            failures.append("euler")
    assert report(5, not failures, "all spot checks hold" if not failures else f"failed: {sorted(set(failures))}")


def test_6_planner_table1(report):
    system = PlannerSystem.from_certificate(fixtures.circle(), fixtures.circle_cover())
    path = plan_path(system, BarycentricPoint.vertex(1), BarycentricPoint.vertex(2))
    inner = [p.carrier[0] for p in path[1:-1]]
    mid = plan_path(system, BarycentricPoint.make({0: Fraction(1, 2), 1: Fraction(1, 2)}), BarycentricPoint.vertex(0))
    sums_ok = all(sum(p.weights) == 1 for p in path + mid)
    ok = inner == [1, 1, 1, 1, 2, 2, 2] and sums_ok
    assert report(6, ok, f"waypoints {inner}, exact weight sums {'ok' if sums_ok else 'broken'}")


def test_7_subdivided_smoke(report):
    K = fixtures.circle()
    P = ordered_product(K, K)
    pi1, pi2 = projections(P)
    tower = SubdivisionTower.build(P, 1)
    t0 = time.perf_counter()
    rep = estimate_distance_subdivided(pi1, pi2, 1, SearchParams(M=1000, N=10**6, t=2, seed=1, time_budget=60))
    elapsed = time.perf_counter() - t0
    ok = len(tower.top.facets) == 108 and bool(verify_cover(rep.certificate)) and elapsed < 120
    assert report(7, ok, f"Sd^1 with {len(tower.top.facets)} facets, {elapsed:.0f} s budgeted run, "
                         f"best parts {rep.certificate.part_sizes()}")
