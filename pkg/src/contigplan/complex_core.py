"""Finite abstract simplicial complexes stored as facet lists.

A complex is the pair (vertices, facets). Every simplex is a sorted tuple of
integer labels, and the label order doubles as the linear order used to
triangulate ordered products. Faces are enumerated on demand only.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Malformed complex or map data."""


class DisconnectedComplexError(ComplexError):
    """The 1-skeleton of a complex that is required to be connected is not."""


@dataclass(frozen=True)
class ProductVertexCodec:
    """Left-major encoding ``(i, j) -> n*i + j`` with ``n`` the right vertex count."""

    left_vertex_count: int
    right_vertex_count: int

    def encode(self, i: int, j: int) -> int:
        if not (0 <= i < self.left_vertex_count and 0 <= j < self.right_vertex_count):
            raise ValueError(f"pair ({i}, {j}) outside codec range")
        return self.right_vertex_count * i + j

    def decode(self, v: int) -> tuple[int, int]:
        if not 0 <= v < self.left_vertex_count * self.right_vertex_count:
            raise ValueError(f"label {v} outside codec range")
        return divmod(v, self.right_vertex_count)


@dataclass(frozen=True)
class Complex:
    vertices: tuple[int, ...]
    facets: tuple[Simplex, ...]
    codec: ProductVertexCodec | None = field(default=None, compare=False)

    def __repr__(self) -> str:
        kind = "ProductComplex" if self.codec is not None else "Complex"
        return f"{kind}({len(self.vertices)} vertices, {len(self.facets)} facets)"

    @property
    def vertex_count(self) -> int:
        """Size of the label range, ``max label + 1``."""
        return self.vertices[-1] + 1 if self.vertices else 0

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def vertex_index(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def facet_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(f) for f in self.facets)

    @cached_property
    def star(self) -> dict[int, tuple[int, ...]]:
        """Vertex -> indices of the facets containing it."""
        acc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for k, f in enumerate(self.facets):
            for v in f:
                acc[v].append(k)
        return {v: tuple(ks) for v, ks in acc.items()}

    @cached_property
    def facet_lookup(self) -> frozenset[Simplex]:
        return frozenset(self.facets)

    def is_dense(self) -> bool:
        return self.vertices == tuple(range(len(self.vertices)))


def _normalize(facet_lists: Iterable[Iterable[int]]) -> tuple[Simplex, ...]:
    simplices = {tuple(sorted(set(f))) for f in facet_lists}
    # larger simplices first so every candidate is compared against potential supersets
    ordered = sorted(simplices, key=lambda s: (-len(s), s))
    kept: list[Simplex] = []
    kept_sets: list[frozenset[int]] = []
    for s in ordered:
        ss = frozenset(s)
        if any(len(k) > len(ss) and ss < k for k in kept_sets):
            continue
        kept.append(s)
        kept_sets.append(ss)
    return tuple(sorted(kept))


def _from_facets(facets: tuple[Simplex, ...], codec: ProductVertexCodec | None = None) -> Complex:
    vertices = tuple(sorted({v for f in facets for v in f}))
    return Complex(vertices, facets, codec)


def build_complex(facet_lists: Sequence[Sequence[int]]) -> Complex:
    """Build a complex on the labels ``0..n-1`` from a list of (possibly non-maximal) faces.

    Non-maximal faces are pruned silently. Every label below the maximum must
    occur in some face.
    """
    if not facet_lists:
        raise ComplexError("a complex needs at least one facet")
    for f in facet_lists:
        if len(f) == 0:
            raise ComplexError("empty facet in input")
        for v in f:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ComplexError(f"vertex labels must be non-negative integers, got {v!r}")
    cx = _from_facets(_normalize(facet_lists))
    if not cx.is_dense():
        missing = sorted(set(range(cx.vertex_count)) - set(cx.vertices))
        raise ComplexError(f"labels {missing} lie in no facet; labels must be 0..{cx.vertex_count - 1}")
    return cx


def simplex_complex(n: int) -> Complex:
    """The full n-simplex on labels ``0..n``."""
    return build_complex([list(range(n + 1))])


def boundary_complex(n: int) -> Complex:
    """Boundary of the n-simplex, e.g. ``boundary_complex(2)`` is the 3-vertex circle."""
    full = tuple(range(n + 1))
    return build_complex([list(c) for c in itertools.combinations(full, n)])


def is_simplex(K: Complex, s: Iterable[int]) -> bool:
    ss = frozenset(s)
    if not ss:
        return False
    first = next(iter(ss))
    if first not in K.star:
        return False
    fsets = K.facet_sets
    return any(ss <= fsets[k] for k in K.star[first])


def faces(K: Complex) -> list[Simplex]:
    """All simplices of ``K`` ordered by (dimension, labels)."""
    acc: set[Simplex] = set()
    for f in K.facets:
        for r in range(1, len(f) + 1):
            acc.update(itertools.combinations(f, r))
    return sorted(acc, key=lambda s: (len(s), s))


def euler_characteristic(K: Complex) -> int:
    return sum((-1) ** (len(s) - 1) for s in faces(K))


def ordered_product(K: Complex, L: Complex) -> Complex:
    """Staircase triangulation of ``K x L`` with vertices encoded left-major."""
    if not K.facets or not L.facets:
        raise ComplexError("ordered product needs nonempty factors")
    codec = ProductVertexCodec(K.vertex_count, L.vertex_count)
    out: list[Simplex] = []
    for sigma in K.facets:
        p = len(sigma) - 1
        for tau in L.facets:
            q = len(tau) - 1
            for steps in itertools.combinations(range(p + q), p):
                i = j = 0
                chain = [codec.encode(sigma[0], tau[0])]
                step_set = set(steps)
                for k in range(p + q):
                    if k in step_set:
                        i += 1
                    else:
                        j += 1
                    chain.append(codec.encode(sigma[i], tau[j]))
                out.append(tuple(sorted(chain)))
    return _from_facets(_normalize(out), codec)


@dataclass(frozen=True)
class Subdivision:
    """Barycentric subdivision plus the table sending each new vertex to its simplex."""

    complex: Complex
    base: Complex
    barycenters: tuple[Simplex, ...]


def barycentric_subdivision(K: Complex) -> Subdivision:
    simplices = faces(K)
    label = {s: k for k, s in enumerate(simplices)}
    out: list[Simplex] = []
    for f in K.facets:
        for order in itertools.permutations(f):
            flag = [label[tuple(sorted(order[: r + 1]))] for r in range(len(order))]
            out.append(tuple(sorted(flag)))
    sd = _from_facets(tuple(sorted(set(out))))
    return Subdivision(sd, K, tuple(simplices))


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map between complexes; ``assignment`` is aligned with ``domain.vertices``.

    Simpliciality is not enforced here; use ``contiguity.is_simplicial``.
    """

    domain: Complex
    codomain: Complex
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != len(self.domain.vertices):
            raise ComplexError(
                f"assignment has {len(self.assignment)} entries, domain has {len(self.domain.vertices)} vertices"
            )
        index = self.codomain.vertex_index
        for w in self.assignment:
            if w not in index:
                raise ComplexError(f"value {w} is not a vertex of the codomain")

    def __repr__(self) -> str:
        return f"SimplicialMap({self.domain!r} -> {self.codomain!r}, {list(self.assignment)})"

    def __call__(self, v: int) -> int:
        return self.assignment[self.domain.vertex_index[v]]

    def image(self, simplex: Iterable[int]) -> frozenset[int]:
        idx = self.domain.vertex_index
        return frozenset(self.assignment[idx[v]] for v in simplex)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain.vertices, self.assignment))

    def restrict(self, sub: Complex) -> SimplicialMap:
        idx = self.domain.vertex_index
        missing = [v for v in sub.vertices if v not in idx]
        if missing:
            raise ComplexError(f"vertices {missing} are not in the domain")
        return SimplicialMap(sub, self.codomain, tuple(self.assignment[idx[v]] for v in sub.vertices))

    def compose(self, first: SimplicialMap) -> SimplicialMap:
        """``self o first``."""
        return SimplicialMap(first.domain, self.codomain, tuple(self(w) for w in first.assignment))

    @classmethod
    def from_function(cls, domain: Complex, codomain: Complex, fn: Callable[[int], int]) -> SimplicialMap:
        return cls(domain, codomain, tuple(fn(v) for v in domain.vertices))

    @classmethod
    def from_mapping(cls, domain: Complex, codomain: Complex, mapping: Mapping[int, int]) -> SimplicialMap:
        return cls(domain, codomain, tuple(mapping[v] for v in domain.vertices))

    @classmethod
    def identity(cls, K: Complex) -> SimplicialMap:
        return cls(K, K, K.vertices)

    @classmethod
    def constant(cls, domain: Complex, codomain: Complex, value: int) -> SimplicialMap:
        return cls(domain, codomain, (value,) * len(domain.vertices))


def approximation_of_identity(sub: Subdivision, rule: str = "min") -> SimplicialMap:
    """Send each barycenter to the minimum (or maximum) label of its simplex."""
    if not isinstance(sub, Subdivision):
        raise ComplexError("approximation_of_identity needs a Subdivision carrying its barycenter table")
    pick = {"min": min, "max": max}[rule]
    return SimplicialMap(sub.complex, sub.base, tuple(pick(s) for s in sub.barycenters))


def skeleton_adjacency(K: Complex) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in K.vertices}
    for f in K.facets:
        for u, v in itertools.combinations(f, 2):
            adj[u].add(v)
            adj[v].add(u)
    return adj


def _bfs(adj: Mapping[int, set[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(K: Complex) -> bool:
    if not K.vertices:
        return False
    return len(_bfs(skeleton_adjacency(K), K.vertices[0])) == len(K.vertices)


def require_connected(K: Complex) -> None:
    if not is_connected(K):
        raise DisconnectedComplexError(f"{K!r} is disconnected; contiguity distance assumes a connected codomain")


def all_pairs_skeleton_distances(K: Complex) -> dict[int, dict[int, int]]:
    """Graph distances on the 1-skeleton, ``d[u][v]``."""
    require_connected(K)
    adj = skeleton_adjacency(K)
    return {v: _bfs(adj, v) for v in K.vertices}


def generated_subcomplex(L: Complex, facet_subset: Iterable[Sequence[int]]) -> Complex:
    """Subcomplex generated by some facets of ``L``; labels are kept as in ``L``."""
    chosen = {tuple(sorted(f)) for f in facet_subset}
    if not chosen:
        raise ComplexError("a generated subcomplex needs at least one facet")
    foreign = [f for f in chosen if f not in L.facet_lookup]
    if foreign:
        raise ComplexError(f"{sorted(foreign)[:3]} are not facets of the ambient complex")
    return _from_facets(tuple(sorted(chosen)), L.codec)


def projections(KxK: Complex) -> tuple[SimplicialMap, SimplicialMap]:
    """The two projections of an ordered product onto its factors."""
    codec = KxK.codec
    if codec is None:
        raise ComplexError("projections need a product complex carrying its codec")
    left = _label_complex(KxK, 0)
    right = _label_complex(KxK, 1)
    pi1 = SimplicialMap(KxK, left, tuple(codec.decode(v)[0] for v in KxK.vertices))
    pi2 = SimplicialMap(KxK, right, tuple(codec.decode(v)[1] for v in KxK.vertices))
    return pi1, pi2


def _label_complex(KxK: Complex, side: int) -> Complex:
    """Recover a factor as the image of the projection on the given side."""
    codec = KxK.codec
    assert codec is not None
    imgs = {tuple(sorted({codec.decode(v)[side] for v in f})) for f in KxK.facets}
    return _from_facets(_normalize(imgs))


def factor_projections(KxK: Complex, left: Complex, right: Complex) -> tuple[SimplicialMap, SimplicialMap]:
    """Projections with explicitly supplied factor complexes as codomains."""
    codec = KxK.codec
    if codec is None:
        raise ComplexError("projections need a product complex carrying its codec")
    pi1 = SimplicialMap(KxK, left, tuple(codec.decode(v)[0] for v in KxK.vertices))
    pi2 = SimplicialMap(KxK, right, tuple(codec.decode(v)[1] for v in KxK.vertices))
    return pi1, pi2


def axial_inclusions(K: Complex, base: int, product: Complex | None = None) -> tuple[SimplicialMap, SimplicialMap]:
    """``v -> (v, base)`` and ``v -> (base, v)`` into ``K x K``."""
    if base not in K.vertex_index:
        raise ComplexError(f"base vertex {base} is not a vertex of {K!r}")
    P = product if product is not None else ordered_product(K, K)
    codec = P.codec
    if codec is None:
        raise ComplexError("axial inclusions need a product complex carrying its codec")
    i1 = SimplicialMap(K, P, tuple(codec.encode(v, base) for v in K.vertices))
    i2 = SimplicialMap(K, P, tuple(codec.encode(base, v) for v in K.vertices))
    return i1, i2

