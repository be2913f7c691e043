"""Covers of a domain complex by contiguity subcomplexes.

Every subcomplex handled here is generated by a set of facets of the domain
``L`` of the two source maps, so a cover is a partition of ``L.facets``. Each
part keeps the rows of a contiguity chain (codomain vertex positions, see
``search.Target``); chains are reduced when a part is finalized.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable

from .complex_core import Complex, ComplexError, SimplicialMap, Simplex, generated_subcomplex
from .contiguity import ContiguityChain, CoverCertificate, CoverPart, verify_chain
from .search import Domain, Row, SearchParams, Target, reduce_rows, search_rows, target_for


@dataclass(frozen=True)
class GrowState:
    """A facet set generating a contiguity subcomplex, with a chain certifying it."""

    facets: frozenset[Simplex]
    chain: ContiguityChain


@dataclass
class _Part:
    facets: frozenset[Simplex]
    complex: Complex
    dom: Domain
    rows: list[Row]
    reduced: bool = False

    def finalize(self, run: _Run) -> _Part:
        if not self.reduced and len(self.rows) > 2:
            self.rows = reduce_rows(self.dom, run.tgt, self.rows)
        self.reduced = True
        return self


@dataclass
class CoveringRun:
    certificate: CoverCertificate
    iterations_used: int = 0
    part_sizes_history: list[list[int]] = field(default_factory=list)
    budget_exhausted: bool = False


class _Run:
    """Shared context of one randomized covering computation."""

    def __init__(self, psi: SimplicialMap, psi_prime: SimplicialMap, params: SearchParams, rng: random.Random | None):
        if psi.domain != psi_prime.domain or psi.codomain != psi_prime.codomain:
            raise ComplexError("source maps must share domain and codomain")
        self.psi = psi
        self.psi_prime = psi_prime
        self.L = psi.domain
        self.params = params
        self.rng = rng if rng is not None else params.rng()
        self.tgt: Target = target_for(psi.codomain)
        self.a = dict(zip(self.L.vertices, self.tgt.row(psi)))
        self.b = dict(zip(self.L.vertices, self.tgt.row(psi_prime)))
        self.deadline = None if params.time_budget is None else time.monotonic() + params.time_budget
        self.expired_flag = False
        full = Domain(self.L)
        if not full.simplicial(self.tgt, tuple(self.a[v] for v in self.L.vertices)):
            raise ComplexError("psi is not simplicial")
        if not full.simplicial(self.tgt, tuple(self.b[v] for v in self.L.vertices)):
            raise ComplexError("psi' is not simplicial")

    def expired(self) -> bool:
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.expired_flag = True
        return self.expired_flag

    def part(self, facets: frozenset[Simplex], rows: list[Row] | None = None) -> tuple[_Part, Row, Row]:
        J = generated_subcomplex(self.L, facets)
        dom = Domain(J)
        a = tuple(self.a[v] for v in J.vertices)
        b = tuple(self.b[v] for v in J.vertices)
        return _Part(facets, J, dom, rows or []), a, b

    def simplex_part(self, sigma: Simplex) -> _Part:
        """Explicit chain on one facet: contract to a vertex, walk a shortest edge path, expand."""
        part, a, b = self.part(frozenset([sigma]))
        tgt = self.tgt
        n = len(a)
        x, y = a[0], b[0]
        rows = [a, (x,) * n]
        while x != y:
            x = next(z for z in tgt.bits_of(tgt.ext[tgt.bit[x]]) if tgt.dist[z][y] < tgt.dist[x][y])
            rows.append((x,) * n)
        rows.append(b)
        part.rows = reduce_rows(part.dom, tgt, rows)
        part.reduced = True
        return part

    def restrict(self, part: _Part, facets: frozenset[Simplex]) -> _Part:
        """Restrict a part's chain to the subcomplex generated by a subset of its facets."""
        if facets == part.facets:
            return part
        new, _, _ = self.part(facets)
        pos = [part.complex.vertex_index[v] for v in new.complex.vertices]
        new.rows = [tuple(r[k] for k in pos) for r in part.rows]
        new.rows = reduce_rows(new.dom, self.tgt, new.rows)
        new.reduced = True
        return new

    def warm_rows(self, state: _Part, dom: Domain, J: Complex, a: Row, b: Row) -> list[Row] | None:
        """Extend the previous chain to new vertices, switching them from psi to psi' at one index."""
        old_pos = state.complex.vertex_index
        src = [old_pos.get(v) for v in J.vertices]
        rows = state.rows
        for switch in range(len(rows)):
            cand = []
            for idx, r in enumerate(rows):
                vals = list(a if idx <= switch else b)
                for k, s in enumerate(src):
                    if s is not None:
                        vals[k] = r[s]
                cand.append(tuple(vals))
            if cand[0] != a or cand[-1] != b:
                continue
            if not all(dom.simplicial(self.tgt, c) for c in cand):
                continue
            if all(dom.contiguous(self.tgt, cand[k], cand[k + 1]) for k in range(len(cand) - 1)):
                return cand
        return None

    def add_facet(self, ambient: list[Simplex], state: _Part) -> _Part | None:
        """One AddFacet step: the first random outside facet that keeps a chain, or ``None``."""
        rng = self.rng
        outside = [s for s in ambient if s not in state.facets]
        while outside:
            if self.expired():
                return None
            sigma = outside.pop(rng.randrange(len(outside)))
            cand, a, b = self.part(state.facets | {sigma})
            rows = None
            if self.params.warm_start and state.rows:
                rows = self.warm_rows(state, cand.dom, cand.complex, a, b)
            if rows is None:
                rows = search_rows(cand.dom, self.tgt, a, b, self.params, rng)
            if rows is not None:
                cand.rows = rows
                return cand
        return None

    def grow(self, ambient: list[Simplex], state: _Part) -> _Part:
        for _ in range(len(ambient)):
            nxt = self.add_facet(ambient, state)
            if nxt is None:
                break
            state = nxt
        return state.finalize(self)

    def rcc(self, ambient: list[Simplex]) -> _Part:
        seed = ambient[self.rng.randrange(len(ambient))]
        return self.grow(ambient, self.simplex_part(seed))

    def covering(self) -> list[_Part]:
        covered: set[Simplex] = set()
        remaining = list(self.L.facets)
        parts: list[_Part] = []
        while remaining:
            J = self.rcc(remaining)
            P = (J.facets & self.L.facet_lookup) - covered
            parts.append(self.restrict(J, frozenset(P)))
            covered |= P
            remaining = [f for f in remaining if f not in P]
        return parts

    def to_public(self, part: _Part) -> GrowState:
        return GrowState(part.facets, self.chain(part))

    def from_public(self, state: GrowState) -> _Part:
        part, a, b = self.part(frozenset(state.facets))
        if state.chain.domain != part.complex:
            raise ComplexError("chain of the start state is not defined on the subcomplex its facets generate")
        check = verify_chain(state.chain, self.psi.restrict(part.complex), self.psi_prime.restrict(part.complex))
        if not check:
            raise ComplexError("invalid start certificate: " + "; ".join(check.diagnostics))
        part.rows = [self.tgt.row(m) for m in state.chain.maps]
        part.reduced = True
        return part

    def chain(self, part: _Part) -> ContiguityChain:
        part.finalize(self)
        K = self.psi.codomain
        J = part.complex
        return ContiguityChain(tuple(SimplicialMap(J, K, self.tgt.labels(r)) for r in part.rows))

    def certificate(self, parts: Iterable[_Part], labels: tuple[str, str] = ("explicit", "explicit")) -> CoverCertificate:
        out = tuple(CoverPart(tuple(sorted(p.facets)), self.chain(p)) for p in order_parts(list(parts)))
        return CoverCertificate(self.L, self.psi, self.psi_prime, out, labels)


def order_parts(parts: list[_Part]) -> list[_Part]:
    """Descending cardinality; ties broken by the sorted facet lists."""
    return sorted(parts, key=lambda p: (-len(p.facets), sorted(p.facets)))


def _largest(new: _Part, old: _Part) -> _Part:
    # ties keep the freshly grown set
    return new if len(new.facets) >= len(old.facets) else old


def _check_partition(L: Complex, parts: list[_Part]) -> None:
    seen: set[Simplex] = set()
    for p in parts:
        if not p.facets or seen & p.facets:
            raise AssertionError("partition lost disjointness or gained an empty part")
        seen |= p.facets
    if seen != L.facet_lookup:
        raise AssertionError("partition no longer covers every facet")


def add_facet(
    state: GrowState,
    psi: SimplicialMap,
    psi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random | None = None,
) -> GrowState:
    """Try the facets outside ``state`` in random order; keep the first one a local search accepts."""
    run = _Run(psi, psi_prime, params, rng)
    start = run.from_public(state)
    nxt = run.add_facet(list(run.L.facets), start)
    if nxt is None:
        return state
    return run.to_public(nxt.finalize(run))


def rcc(psi: SimplicialMap, psi_prime: SimplicialMap, params: SearchParams, rng: random.Random | None = None) -> GrowState:
    """Random contiguity subcomplex grown from a uniformly chosen facet."""
    run = _Run(psi, psi_prime, params, rng)
    return run.to_public(run.rcc(list(run.L.facets)))


def add_facets(
    start: GrowState,
    psi: SimplicialMap,
    psi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random | None = None,
) -> GrowState:
    """Grow ``start`` by repeated ``add_facet`` until no facet can be added."""
    run = _Run(psi, psi_prime, params, rng)
    return run.to_public(run.grow(list(run.L.facets), run.from_public(start)))


def seed_state(psi: SimplicialMap, psi_prime: SimplicialMap, facet: Simplex) -> GrowState:
    """The single-facet contiguity subcomplex with its explicit chain."""
    run = _Run(psi, psi_prime, SearchParams(), random.Random(0))
    return run.to_public(run.simplex_part(tuple(facet)))


def covering(
    psi: SimplicialMap,
    psi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random | None = None,
    labels: tuple[str, str] = ("explicit", "explicit"),
) -> CoverCertificate:
    """Repeated RCC on the still-uncovered facets until every facet lies in a part."""
    run = _Run(psi, psi_prime, params, rng)
    return run.certificate(run.covering(), labels)


def run_optimized_covering(
    psi: SimplicialMap,
    psi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random | None = None,
    labels: tuple[str, str] = ("explicit", "explicit"),
) -> CoveringRun:
    run = _Run(psi, psi_prime, params, rng)
    parts = run.covering()
    history = [sorted((len(p.facets) for p in parts), reverse=True)]
    N, t = params.N, params.t
    i = 0
    j = 0
    while i < N and len(parts) > t:
        if run.expired():
            break
        i += 1
        previous = parts
        parts = order_parts(parts)
        p = len(parts) - 1
        # step 2: fresh RCC inside P_j .. P_p, keep the larger of it and P_j
        D = sorted(set().union(*(q.facets for q in parts[j:])))
        P = _largest(run.rcc(D), parts[j])
        # step 3: grow into P_{j-1} .. P_p
        lo = max(0, j - 1)
        D = sorted(set().union(*(q.facets for q in parts[lo:])))
        Q = run.grow(D, P)
        if j > 0:
            Q = _largest(Q, parts[j - 1])
        rebuilt = parts[:lo] + [Q]
        for k in range(lo, p + 1):
            rest = parts[k].facets - Q.facets
            if rest:
                rebuilt.append(run.restrict(parts[k], frozenset(rest)))
        _check_partition(run.L, rebuilt)
        parts = previous if len(previous) < len(rebuilt) else rebuilt
        history.append(sorted((len(q.facets) for q in parts), reverse=True))
        j += 1
        if j > len(parts) - 1:
            j = 0
    cert = run.certificate(parts, labels)
    return CoveringRun(cert, i, history, run.expired_flag)


def optimized_covering(
    psi: SimplicialMap,
    psi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random | None = None,
    labels: tuple[str, str] = ("explicit", "explicit"),
) -> CoverCertificate:
    """Covering followed by at most ``params.N`` merge passes, stopping at ``params.t`` parts."""
    return run_optimized_covering(psi, psi_prime, params, rng, labels).certificate
