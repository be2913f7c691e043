"""Simpliciality and contiguity predicates, and certificate verification.

Everything here recomputes from facet lists with plain set logic. The search
code keeps its own bitmask engine, so a certificate emitted by search is
always checked by a second, unrelated implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .complex_core import (
    Complex,
    ComplexError,
    SimplicialMap,
    Simplex,
    generated_subcomplex,
    is_simplex,
)

__all__ = [
    "SimplicialMap",
    "ContiguityChain",
    "CoverPart",
    "CoverCertificate",
    "DistanceReport",
    "Verification",
    "is_simplicial",
    "contiguous",
    "map_distance",
    "verify_chain",
    "verify_cover",
]


@dataclass(frozen=True)
class ContiguityChain:
    """Maps ``phi_0, ..., phi_c`` with a shared domain and codomain."""

    maps: tuple[SimplicialMap, ...]

    def __post_init__(self) -> None:
        if not self.maps:
            raise ComplexError("a contiguity chain needs at least one map")
        d, c = self.maps[0].domain, self.maps[0].codomain
        for m in self.maps[1:]:
            if m.domain != d or m.codomain != c:
                raise ComplexError("maps in a chain must share domain and codomain")

    @property
    def length(self) -> int:
        return len(self.maps) - 1

    @property
    def domain(self) -> Complex:
        return self.maps[0].domain

    @property
    def codomain(self) -> Complex:
        return self.maps[0].codomain

    @property
    def start(self) -> SimplicialMap:
        return self.maps[0]

    @property
    def end(self) -> SimplicialMap:
        return self.maps[-1]

    def __len__(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class CoverPart:
    facets: tuple[Simplex, ...]
    chain: ContiguityChain

    @property
    def subcomplex(self) -> Complex:
        return self.chain.domain


@dataclass(frozen=True)
class CoverCertificate:
    """A facet partition of ``domain`` where every part carries a chain from psi to psi'."""

    domain: Complex
    psi: SimplicialMap
    psi_prime: SimplicialMap
    parts: tuple[CoverPart, ...]
    labels: tuple[str, str] = ("explicit", "explicit")

    @property
    def codomain(self) -> Complex:
        return self.psi.codomain

    @property
    def bound(self) -> int:
        return len(self.parts) - 1

    def part_sizes(self) -> list[int]:
        return [len(p.facets) for p in self.parts]


@dataclass
class DistanceReport:
    bound: int
    certificate: CoverCertificate
    params: Any
    elapsed: float
    seed: int
    part_sizes_history: list[list[int]] = field(default_factory=list)
    iterations_used: int = 0
    reached_target: bool = True
    budget_exhausted: bool = False

    def run_report(self) -> dict:
        return {
            "seed": self.seed,
            "params": self.params.to_dict() if hasattr(self.params, "to_dict") else self.params,
            "bound": self.bound,
            "part_sizes": self.certificate.part_sizes(),
            "iterations_used": self.iterations_used,
            "part_sizes_history": self.part_sizes_history,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
            "reached_target": self.reached_target,
            "budget_exhausted": self.budget_exhausted,
        }


@dataclass
class Verification:
    ok: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, message: str) -> Verification:
        self.ok = False
        self.diagnostics.append(message)
        return self


def _same_shape(f: SimplicialMap, g: SimplicialMap) -> None:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ComplexError("maps must share domain and codomain")


def _first_bad_facet(f: SimplicialMap, g: SimplicialMap | None = None) -> Simplex | None:
    for sigma in f.domain.facets:
        img = set(f.image(sigma))
        if g is not None:
            img |= g.image(sigma)
        if not is_simplex(f.codomain, img):
            return sigma
    return None


def is_simplicial(f: SimplicialMap) -> bool:
    return _first_bad_facet(f) is None


def contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    """1-contiguity: ``f(s) | g(s)`` is a simplex for every facet ``s``.

    Non-simplicial inputs give ``False``. Checking facets is enough because
    faces inherit the condition.
    """
    _same_shape(f, g)
    if not is_simplicial(f) or not is_simplicial(g):
        return False
    return _first_bad_facet(f, g) is None


def map_distance(f: SimplicialMap, g: SimplicialMap, dist: Mapping[int, Mapping[int, int]]) -> int:
    """Sum over domain vertices of the 1-skeleton distance between images."""
    _same_shape(f, g)
    return sum(dist[a][b] for a, b in zip(f.assignment, g.assignment))


def verify_chain(
    chain: ContiguityChain,
    expected_start: SimplicialMap | None = None,
    expected_end: SimplicialMap | None = None,
) -> Verification:
    """Check every map is simplicial, consecutive maps are 1-contiguous and endpoints match.

    Diagnostics name the first failure in chain order and canonical facet order.
    """
    result = Verification(True)
    maps = chain.maps
    for k, m in enumerate(maps):
        bad = _first_bad_facet(m)
        if bad is not None:
            return result.fail(f"map {k} is not simplicial: facet {list(bad)} goes to {sorted(m.image(bad))}")
    for k in range(len(maps) - 1):
        bad = _first_bad_facet(maps[k], maps[k + 1])
        if bad is not None:
            union = sorted(maps[k].image(bad) | maps[k + 1].image(bad))
            return result.fail(
                f"maps {k} and {k + 1} are not contiguous: facet {list(bad)} has union image {union}"
            )
    for name, want, got in (("start", expected_start, chain.start), ("end", expected_end, chain.end)):
        if want is None:
            continue
        if want.domain != got.domain or want.codomain != got.codomain:
            result.fail(f"{name} map has a different domain or codomain than expected")
        elif want.assignment != got.assignment:
            diff = [v for v, a, b in zip(got.domain.vertices, got.assignment, want.assignment) if a != b]
            result.fail(f"{name} map differs from the expected map at vertices {diff}")
    return result


def verify_cover(cert: CoverCertificate) -> Verification:
    """Check the parts partition the facets of the domain and every chain is valid on its part."""
    result = Verification(True)
    L = cert.domain
    if cert.psi.domain != L or cert.psi_prime.domain != L:
        return result.fail("source maps are not defined on the cover's domain")
    if cert.psi.codomain != cert.psi_prime.codomain:
        return result.fail("source maps have different codomains")
    seen: dict[Simplex, int] = {}
    for k, part in enumerate(cert.parts):
        if not part.facets:
            return result.fail(f"part {k} is empty")
        for f in part.facets:
            if f not in L.facet_lookup:
                return result.fail(f"part {k} contains {list(f)}, which is not a facet of the domain")
            if f in seen:
                return result.fail(f"facet {list(f)} lies in parts {seen[f]} and {k}")
            seen[f] = k
    missing = [f for f in L.facets if f not in seen]
    if missing:
        return result.fail(f"{len(missing)} facets are not covered, first {list(missing[0])}")
    for k, part in enumerate(cert.parts):
        J = generated_subcomplex(L, part.facets)
        if part.chain.domain != J:
            return result.fail(f"chain of part {k} is not defined on the subcomplex generated by its facets")
        if part.chain.codomain != cert.codomain:
            return result.fail(f"chain of part {k} has the wrong codomain")
        sub = verify_chain(part.chain, cert.psi.restrict(J), cert.psi_prime.restrict(J))
        if not sub:
            return result.fail(f"part {k}: " + "; ".join(sub.diagnostics))
    return result


def restrict_chain(chain: ContiguityChain, sub: Complex) -> ContiguityChain:
    return ContiguityChain(tuple(m.restrict(sub) for m in chain.maps))


def chain_from_rows(domain: Complex, codomain: Complex, rows: Sequence[Sequence[int]]) -> ContiguityChain:
    return ContiguityChain(tuple(SimplicialMap(domain, codomain, tuple(r)) for r in rows))
