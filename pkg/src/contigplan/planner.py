"""Distance estimators and execution of piecewise-linear motion planners."""

from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .complex_core import (
    Complex,
    ComplexError,
    SimplicialMap,
    Simplex,
    approximation_of_identity,
    axial_inclusions,
    barycentric_subdivision,
    factor_projections,
    is_simplex,
    ordered_product,
    require_connected,
)
from .contiguity import CoverCertificate, DistanceReport, verify_cover
from .covering import run_optimized_covering
from .search import SearchParams

DEFAULT_MAX_FACETS = 20000


class UncoveredPointError(ComplexError):
    """The product point does not lie in the requested (or any) local domain."""


class ResourceLimitError(ComplexError):
    pass


def estimate_distance(
    phi: SimplicialMap,
    phi_prime: SimplicialMap,
    params: SearchParams,
    rng: random.Random | None = None,
    labels: tuple[str, str] = ("explicit", "explicit"),
) -> DistanceReport:
    """Upper bound for the strict contiguity distance, with the cover that proves it."""
    require_connected(phi.codomain)
    started = time.perf_counter()
    run = run_optimized_covering(phi, phi_prime, params, rng, labels)
    elapsed = time.perf_counter() - started
    cert = run.certificate
    return DistanceReport(
        bound=cert.bound,
        certificate=cert,
        params=params,
        elapsed=elapsed,
        seed=params.seed,
        part_sizes_history=run.part_sizes_history,
        iterations_used=run.iterations_used,
        reached_target=len(cert.parts) <= params.t,
        budget_exhausted=run.budget_exhausted,
    )


def estimate_sc(K: Complex, params: SearchParams, rng: random.Random | None = None) -> DistanceReport:
    """Strict simplicial complexity: distance between the projections of ``K x K``."""
    require_connected(K)
    P = ordered_product(K, K)
    pi1, pi2 = factor_projections(P, K, K)
    return estimate_distance(pi1, pi2, params, rng, ("pi1", "pi2"))


def estimate_cat(K: Complex, base: int, params: SearchParams, rng: random.Random | None = None) -> DistanceReport:
    """LS-category bound as the distance between the two axial inclusions ``K -> K x K``."""
    require_connected(K)
    i1, i2 = axial_inclusions(K, base)
    return estimate_distance(i1, i2, params, rng, ("iota1", "iota2"))


@dataclass(frozen=True)
class SubdivisionTower:
    """``Sd^0(L), ..., Sd^b(L)`` with min-vertex approximations ``Sd^k -> Sd^(k-1)``."""

    complexes: tuple[Complex, ...]
    maps: tuple[SimplicialMap, ...]

    @property
    def depth(self) -> int:
        return len(self.maps)

    @classmethod
    def build(cls, L: Complex, depth: int, max_facets: int | None = None) -> SubdivisionTower:
        if depth < 0:
            raise ValueError("subdivision depth must be non-negative")
        limit = max_facets if max_facets is not None else max_facets_from_env()
        complexes = [L]
        maps = []
        for _ in range(depth):
            cur = complexes[-1]
            predicted = sum(math.factorial(len(f)) for f in cur.facets)
            if predicted > limit:
                raise ResourceLimitError(
                    f"subdividing {cur!r} would give {predicted} facets, above the limit of {limit} "
                    "(raise CONTIG_MAX_FACETS to allow it)"
                )
            sub = barycentric_subdivision(cur)
            complexes.append(sub.complex)
            maps.append(approximation_of_identity(sub))
        return cls(tuple(complexes), tuple(maps))

    @property
    def top(self) -> Complex:
        return self.complexes[-1]

    def composite(self) -> SimplicialMap:
        """``Sd^b(L) -> L`` as the composite of all approximation maps."""
        out = SimplicialMap.identity(self.top)
        for m in reversed(self.maps):
            out = m.compose(out)
        return out


def max_facets_from_env() -> int:
    raw = os.environ.get("CONTIG_MAX_FACETS")
    if not raw:
        return DEFAULT_MAX_FACETS
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"CONTIG_MAX_FACETS must be an integer, got {raw!r}") from None


def estimate_distance_subdivided(
    phi: SimplicialMap,
    phi_prime: SimplicialMap,
    depth: int,
    params: SearchParams,
    rng: random.Random | None = None,
    max_facets: int | None = None,
    labels: tuple[str, str] = ("explicit", "explicit"),
) -> DistanceReport:
    """Distance between ``phi o iota`` and ``phi' o iota`` on the ``depth``-fold subdivided domain."""
    if phi.domain != phi_prime.domain:
        raise ComplexError("maps must share a domain")
    if depth == 0:
        return estimate_distance(phi, phi_prime, params, rng, labels)
    iota = SubdivisionTower.build(phi.domain, depth, max_facets).composite()
    return estimate_distance(phi.compose(iota), phi_prime.compose(iota), params, rng)


def _as_fraction(w: object) -> Fraction:
    if isinstance(w, Fraction):
        return w
    if isinstance(w, float):
        return Fraction(repr(w))
    return Fraction(w)  # type: ignore[arg-type]


@dataclass(frozen=True)
class BarycentricPoint:
    """Point of an open realized simplex: positive exact weights summing to one."""

    carrier: Simplex
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.carrier) != len(self.weights) or not self.carrier:
            raise ValueError("carrier and weights must be nonempty and of equal length")
        if list(self.carrier) != sorted(set(self.carrier)):
            raise ValueError("carrier must be strictly increasing")
        if any(w <= 0 for w in self.weights):
            raise ValueError("barycentric weights must be positive")
        if sum(self.weights) != 1:
            raise ValueError(f"weights sum to {sum(self.weights)}, not 1")

    @classmethod
    def make(cls, weights: dict[int, object] | Iterable[tuple[int, object]]) -> BarycentricPoint:
        """Build from vertex -> weight pairs; zero weights are dropped, floats within 1e-12 of summing to one are renormalized."""
        items = weights.items() if isinstance(weights, dict) else weights
        acc: dict[int, Fraction] = {}
        for v, w in items:
            acc[v] = acc.get(v, Fraction(0)) + _as_fraction(w)
        acc = {v: w for v, w in acc.items() if w != 0}
        total = sum(acc.values())
        if total != 1:
            if abs(total - 1) > Fraction(1, 10**12):
                raise ValueError(f"weights sum to {float(total)}, not 1")
            acc = {v: w / total for v, w in acc.items()}
        carrier = tuple(sorted(acc))
        return cls(carrier, tuple(acc[v] for v in carrier))

    @classmethod
    def vertex(cls, v: int) -> BarycentricPoint:
        return cls((v,), (Fraction(1),))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(zip(self.carrier, self.weights))

    def lies_in(self, K: Complex) -> bool:
        return is_simplex(K, self.carrier)


def pushforward(f: SimplicialMap, x: BarycentricPoint) -> BarycentricPoint:
    """Image under the realization of ``f``; weights of coinciding images add up."""
    acc: dict[int, Fraction] = {}
    for v, w in zip(x.carrier, x.weights):
        y = f(v)
        acc[y] = acc.get(y, Fraction(0)) + w
    carrier = tuple(sorted(acc))
    return BarycentricPoint(carrier, tuple(acc[v] for v in carrier))


def product_point(a: BarycentricPoint, b: BarycentricPoint, product: Complex) -> BarycentricPoint:
    """Point ``(a, b)`` of the ordered product, carried by the staircase chain of its weights.

    Cumulative weights of ``a`` and ``b`` (in label order) cut ``[0, 1]`` into
    intervals; each interval of positive length contributes its length to the
    product vertex pairing the current vertices of ``a`` and ``b``.
    """
    codec = product.codec
    if codec is None:
        raise ComplexError("product_point needs a product complex carrying its codec")
    acc: dict[int, Fraction] = {}
    i = j = 0
    ca, cb = a.weights[0], b.weights[0]
    prev = Fraction(0)
    while i < len(a.carrier) and j < len(b.carrier):
        cut = min(ca, cb)
        if cut > prev:
            v = codec.encode(a.carrier[i], b.carrier[j])
            acc[v] = acc.get(v, Fraction(0)) + (cut - prev)
        prev = cut
        if ca == cut:
            i += 1
            if i < len(a.carrier):
                ca += a.weights[i]
        if cb == cut:
            j += 1
            if j < len(b.carrier):
                cb += b.weights[j]
    carrier = tuple(sorted(acc))
    return BarycentricPoint(carrier, tuple(acc[v] for v in carrier))


@dataclass(frozen=True)
class PlannerSystem:
    """Verified cover of ``K x K`` for the two projections: one local planner per part."""

    base: Complex
    product: Complex
    certificate: CoverCertificate

    @classmethod
    def from_certificate(cls, base: Complex, certificate: CoverCertificate, verify: bool = True) -> PlannerSystem:
        P = certificate.domain
        if P.codec is None:
            raise ComplexError("a planner system needs a cover of a product complex")
        pi1, pi2 = factor_projections(P, base, base)
        if certificate.psi.assignment != pi1.assignment or certificate.psi_prime.assignment != pi2.assignment:
            raise ComplexError("planner covers must be certificates for the two projections")
        if certificate.codomain != base:
            raise ComplexError("certificate codomain differs from the base complex")
        if verify:
            check = verify_cover(certificate)
            if not check:
                raise ComplexError("certificate does not verify: " + "; ".join(check.diagnostics))
        return cls(base, P, certificate)

    @property
    def parts(self):
        return self.certificate.parts


def locate_in_part(system: PlannerSystem, product_carrier: Sequence[int]) -> int:
    """Index of the first part whose subcomplex contains the carrier simplex."""
    for k, part in enumerate(system.parts):
        if is_simplex(part.subcomplex, product_carrier):
            return k
    raise UncoveredPointError(f"simplex {list(product_carrier)} lies in no local domain")


def plan_path(
    system: PlannerSystem,
    a: BarycentricPoint,
    b: BarycentricPoint,
    product_carrier: Sequence[int] | None = None,
    part: int | None = None,
) -> list[BarycentricPoint]:
    """Waypoints ``a, phi_0(a,b), ..., phi_c(a,b), b`` of the local planner covering ``(a, b)``.

    ``product_carrier`` may name a simplex of ``K x K`` containing the point to
    steer the dispatch; ``part`` forces a local domain.
    """
    for name, x in (("a", a), ("b", b)):
        if not x.lies_in(system.base):
            raise ComplexError(f"{name} is not a point of the base complex")
    x = product_point(a, b, system.product)
    carrier = tuple(sorted(product_carrier)) if product_carrier is not None else x.carrier
    if not set(x.carrier) <= set(carrier):
        raise ComplexError(f"simplex {list(carrier)} does not contain the product point's carrier {list(x.carrier)}")
    if not is_simplex(system.product, carrier):
        raise ComplexError(f"{list(carrier)} is not a simplex of the product")
    if part is None:
        part = locate_in_part(system, carrier)
    elif not 0 <= part < len(system.parts):
        raise UncoveredPointError(f"no local domain with index {part}")
    elif not is_simplex(system.parts[part].subcomplex, carrier):
        owners = [k for k, q in enumerate(system.parts) if is_simplex(q.subcomplex, carrier)]
        raise UncoveredPointError(f"part {part} does not contain {list(carrier)}; parts covering it: {owners}")
    chain = system.parts[part].chain
    return [a, *(pushforward(m, x) for m in chain.maps), b]
