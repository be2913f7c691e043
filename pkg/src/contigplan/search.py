"""Randomized local search for contiguity chains, and chain reduction.

The walk runs on a bitmask engine: a codomain simplex is an integer mask over
codomain vertex positions and ``ext[s]`` lists, as a mask, every vertex that
can be added to ``s`` without leaving the complex. A single-vertex move at
``w`` is then contiguous to the current map iff the new value lies in the
intersection of ``ext`` over the facets containing ``w``.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .complex_core import Complex, ComplexError, SimplicialMap, all_pairs_skeleton_distances
from .contiguity import ContiguityChain, contiguous, verify_chain

VARIANTS = ("basic", "neighborhood")

Row = tuple[int, ...]
TraceHook = Callable[[dict], None]


@dataclass(frozen=True)
class SearchParams:
    """Knobs of a randomized run.

    ``M`` bounds the walk length of one local search, ``r`` is the probability
    of accepting a non-improving move, ``N`` and ``t`` drive the covering
    optimizer (iteration cap and target part count).
    """

    M: int = 1000
    r: float = 0.1
    variant: str = "neighborhood"
    seed: int = 0
    N: int = 500
    t: int = 2
    warm_start: bool = False
    time_budget: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M!r}")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.N < 0:
            raise ValueError("N must be non-negative")
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time budget must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    def rng(self) -> random.Random:
        return random.Random(self.seed)


class Target:
    """Bitmask tables for a fixed connected codomain."""

    def __init__(self, K: Complex):
        self.complex = K
        self.n = len(K.vertices)
        self.index = K.vertex_index
        self.bit = tuple(1 << k for k in range(self.n))
        self.full = (1 << self.n) - 1
        simplices: set[int] = set()
        for f in K.facets:
            fm = 0
            for v in f:
                fm |= 1 << self.index[v]
            sub = fm
            while sub:
                simplices.add(sub)
                sub = (sub - 1) & fm
        self.simplices = frozenset(simplices)
        ext: dict[int, int] = {}
        for s in simplices:
            e = 0
            for x in range(self.n):
                if (s | self.bit[x]) in simplices:
                    e |= self.bit[x]
            ext[s] = e
        self.ext = ext
        d = all_pairs_skeleton_distances(K)
        self.dist = tuple(tuple(d[u][v] for v in K.vertices) for u in K.vertices)
        self._bits_of: dict[int, tuple[int, ...]] = {}

    def bits_of(self, mask: int) -> tuple[int, ...]:
        got = self._bits_of.get(mask)
        if got is None:
            got = tuple(x for x in range(self.n) if (mask >> x) & 1)
            self._bits_of[mask] = got
        return got

    def row(self, f: SimplicialMap) -> Row:
        idx = self.index
        return tuple(idx[w] for w in f.assignment)

    def labels(self, row: Sequence[int]) -> tuple[int, ...]:
        verts = self.complex.vertices
        return tuple(verts[x] for x in row)


@lru_cache(maxsize=64)
def target_for(K: Complex) -> Target:
    return Target(K)


class Domain:
    """Facets of a domain complex as tuples of vertex positions, plus incidence."""

    def __init__(self, J: Complex):
        self.complex = J
        idx = J.vertex_index
        self.nv = len(J.vertices)
        self.facets = tuple(tuple(idx[v] for v in f) for f in J.facets)
        inc: list[list[int]] = [[] for _ in range(self.nv)]
        for k, f in enumerate(self.facets):
            for p in f:
                inc[p].append(k)
        self.inc = tuple(tuple(x) for x in inc)

    def masks(self, tgt: Target, row: Sequence[int]) -> list[int]:
        bit = tgt.bit
        out = []
        for f in self.facets:
            m = 0
            for p in f:
                m |= bit[row[p]]
            out.append(m)
        return out

    def simplicial(self, tgt: Target, row: Sequence[int]) -> bool:
        S = tgt.simplices
        return all(m in S for m in self.masks(tgt, row))

    def contiguous(self, tgt: Target, a: Sequence[int], b: Sequence[int]) -> bool:
        """Assumes both rows are simplicial."""
        bit = tgt.bit
        S = tgt.simplices
        for f in self.facets:
            m = 0
            for p in f:
                m |= bit[a[p]] | bit[b[p]]
            if m not in S:
                return False
        return True


def walk(
    dom: Domain,
    tgt: Target,
    start: Row,
    goal: Row,
    M: int,
    r: float,
    variant: str,
    rng: random.Random,
    trace: TraceHook | None = None,
) -> list[Row] | None:
    """Random walk from ``start`` towards ``goal``; the raw chain or ``None``."""
    nv = dom.nv
    inc = dom.inc
    facets = dom.facets
    ext = tgt.ext
    bit = tgt.bit
    dist = tgt.dist
    full = tgt.full
    nk = tgt.n
    neighborhood = variant == "neighborhood"
    randrange = rng.randrange
    uniform = rng.random

    cur = list(start)
    masks = dom.masks(tgt, cur)
    d = sum(dist[a][b] for a, b in zip(cur, goal))
    path = [tuple(cur)]
    for i in range(1, M + 1):
        w = randrange(nv)
        cw = cur[w]
        allowed = full
        for fi in inc[w]:
            allowed &= ext[masks[fi]]
        if neighborhood:
            allowed &= ~bit[cw]
            if not allowed:
                if trace is not None:
                    trace({"i": i, "vertex": w, "accepted": False, "d": d, "empty": True})
                continue
            options = tgt.bits_of(allowed)
            x = options[randrange(len(options))]
            p = uniform()
            ok = True
        else:
            if nk < 2:
                break
            x = randrange(nk - 1)
            if x >= cw:
                x += 1
            p = uniform()
            ok = bool((allowed >> x) & 1)
        accepted = False
        if ok:
            gw = goal[w]
            delta = dist[x][gw] - dist[cw][gw]
            if p < r or delta < 0:
                accepted = True
                cur[w] = x
                d += delta
                for fi in inc[w]:
                    m = 0
                    for q in facets[fi]:
                        m |= bit[cur[q]]
                    masks[fi] = m
                path.append(tuple(cur))
        if trace is not None:
            trace({"i": i, "vertex": w, "accepted": accepted, "d": d})
        if accepted and d == 0:
            return path
    return None


def reduce_rows(dom: Domain, tgt: Target, rows: Sequence[Row]) -> list[Row]:
    """Greedy far-jump compression of a valid chain of rows."""
    c = len(rows) - 1
    out = [rows[0]]
    j = 0
    while j != c:
        i = c
        while not dom.contiguous(tgt, rows[j], rows[i]):
            i -= 1
        if i == j:
            raise ComplexError(f"chain is broken after position {j}")
        out.append(rows[i])
        j = i
    return out


def _prepare(phi: SimplicialMap, phi_prime: SimplicialMap) -> tuple[Domain, Target, Row, Row]:
    if phi.domain != phi_prime.domain or phi.codomain != phi_prime.codomain:
        raise ComplexError("maps must share domain and codomain")
    tgt = target_for(phi.codomain)
    dom = Domain(phi.domain)
    a, b = tgt.row(phi), tgt.row(phi_prime)
    if not dom.simplicial(tgt, a):
        raise ComplexError("start map is not simplicial")
    if not dom.simplicial(tgt, b):
        raise ComplexError("goal map is not simplicial")
    return dom, tgt, a, b


def _to_chain(dom: Domain, tgt: Target, codomain: Complex, rows: Sequence[Row]) -> ContiguityChain:
    J = dom.complex
    return ContiguityChain(tuple(SimplicialMap(J, codomain, tgt.labels(r)) for r in rows))


def search_rows(
    dom: Domain,
    tgt: Target,
    a: Row,
    b: Row,
    params: SearchParams,
    rng: random.Random,
    trace: TraceHook | None = None,
) -> list[Row] | None:
    if dom.contiguous(tgt, a, b):
        return [a, b]
    return walk(dom, tgt, a, b, params.M, params.r, params.variant, rng, trace)


def local_search(
    phi: SimplicialMap,
    phi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random,
    trace: TraceHook | None = None,
) -> ContiguityChain | None:
    """Look for a contiguity chain from ``phi`` to ``phi_prime``.

    Returns ``(phi, phi_prime)`` at once when the two are already contiguous;
    otherwise a walk of at most ``params.M`` proposals, each changing one
    vertex. A failed walk returns ``None`` and keeps no partial progress.
    """
    dom, tgt, a, b = _prepare(phi, phi_prime)
    rows = search_rows(dom, tgt, a, b, params, rng, trace)
    if rows is None:
        return None
    return _to_chain(dom, tgt, phi.codomain, rows)


def candidate_moves(phi: SimplicialMap, w: int) -> list[SimplicialMap]:
    """Simplicial maps that differ from ``phi`` only at ``w`` and are contiguous to it."""
    k = phi.domain.vertex_index[w]
    out = []
    for x in phi.codomain.vertices:
        if x == phi.assignment[k]:
            continue
        values = list(phi.assignment)
        values[k] = x
        f = SimplicialMap(phi.domain, phi.codomain, tuple(values))
        if contiguous(phi, f):
            out.append(f)
    return out


def reduce(chain: ContiguityChain, validate: bool = True) -> ContiguityChain:
    """Drop intermediate maps whenever an earlier map is contiguous to a later one."""
    if validate:
        check = verify_chain(chain)
        if not check:
            raise ComplexError("cannot reduce an invalid chain: " + "; ".join(check.diagnostics))
    if len(chain.maps) <= 2:
        return chain
    tgt = target_for(chain.codomain)
    dom = Domain(chain.domain)
    rows = [tgt.row(m) for m in chain.maps]
    kept = reduce_rows(dom, tgt, rows)
    return _to_chain(dom, tgt, chain.codomain, kept)


def reduce_to_fixpoint(chain: ContiguityChain) -> tuple[ContiguityChain, int]:
    """Apply ``reduce`` until the length stops changing; returns the chain and round count."""
    rounds = 0
    cur = chain
    while True:
        nxt = reduce(cur, validate=rounds == 0)
        rounds += 1
        if nxt.length == cur.length:
            return nxt, rounds
        cur = nxt
