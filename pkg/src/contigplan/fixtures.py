"""Reference covers for the 3-vertex circle and the 4-vertex wedge of two circles.

Both live on ordered squares ``K x K`` with vertex ``(i, j)`` encoded as
``n*i + j``. Each part lists its facets and a contiguity chain from the first
projection to the second; rows are aligned with the part's vertices.

Running ``python -m contigplan.fixtures DIR`` writes the complexes and covers
as JSON files into ``DIR``.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .complex_core import Complex, build_complex, factor_projections, generated_subcomplex, ordered_product
from .contiguity import CoverCertificate, CoverPart, chain_from_rows

CIRCLE_FACETS = [[0, 1], [0, 2], [1, 2]]
WEDGE_FACETS = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3]]

# triangles labelled 0 and 1 in the picture of the covered torus
CIRCLE_PARTS = [
    [(0, 1, 4), (0, 1, 7), (0, 6, 7), (0, 6, 8), (1, 2, 5), (1, 4, 5), (3, 5, 8), (3, 6, 7), (3, 6, 8), (4, 5, 8)],
    [(0, 2, 5), (0, 2, 8), (0, 3, 4), (0, 3, 5), (1, 2, 8), (1, 7, 8), (3, 4, 7), (4, 7, 8)],
]

CIRCLE_CHAINS = [
    # vertices 0..8
    [
        [0, 0, 0, 1, 1, 1, 2, 2, 2],
        [0, 0, 0, 2, 1, 1, 2, 2, 2],
        [0, 0, 0, 2, 1, 1, 0, 0, 2],
        [0, 1, 1, 2, 1, 1, 0, 0, 2],
        [0, 1, 2, 2, 1, 2, 0, 0, 2],
        [0, 1, 2, 0, 1, 2, 0, 0, 2],
        [0, 1, 2, 0, 1, 2, 0, 1, 2],
    ],
    # vertices 0, 1, 2, 3, 4, 5, 7, 8
    [
        [0, 0, 0, 1, 1, 1, 2, 2],
        [0, 2, 0, 1, 1, 1, 2, 2],
        [0, 2, 0, 1, 1, 1, 1, 2],
        [0, 2, 0, 0, 1, 1, 1, 2],
        [0, 2, 0, 0, 1, 0, 1, 2],
        [0, 2, 2, 0, 1, 0, 1, 2],
        [0, 1, 2, 0, 1, 0, 1, 2],
        [0, 2, 2, 0, 1, 0, 1, 2],
        [0, 1, 2, 0, 1, 0, 1, 2],
        [0, 1, 2, 0, 1, 2, 1, 2],
    ],
]

WEDGE_PARTS = [
    [
        (5, 9, 10), (0, 3, 15), (0, 4, 7), (4, 8, 11), (0, 4, 6), (5, 13, 15), (0, 3, 7),
        (0, 2, 10), (0, 2, 6), (0, 4, 5), (0, 12, 14), (1, 13, 15), (0, 12, 15), (4, 5, 9),
        (4, 8, 9), (4, 5, 13), (4, 7, 11), (1, 3, 15), (0, 2, 14), (1, 3, 7),
    ],
    [
        (4, 7, 15), (0, 1, 9), (1, 2, 6), (0, 1, 13), (4, 12, 13), (5, 7, 15), (1, 9, 10),
        (1, 13, 14), (0, 1, 5), (1, 5, 7), (4, 12, 15), (0, 8, 9), (1, 5, 6), (0, 3, 11),
        (0, 12, 13), (0, 8, 11), (1, 2, 10), (1, 2, 14),
    ],
    [
        (4, 12, 14), (0, 8, 10), (1, 9, 11), (1, 3, 11), (5, 13, 14), (4, 6, 10), (4, 6, 14),
        (5, 6, 10), (5, 6, 14), (4, 8, 10), (5, 7, 11), (5, 9, 11),
    ],
]

WEDGE_CHAINS = [
    # vertices 0..15
    [
        [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3],
        [0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 0, 3, 0, 3],
        [0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 2, 1, 0, 3, 2, 3],
        [0, 0, 2, 0, 1, 1, 0, 0, 0, 1, 2, 1, 0, 3, 0, 3],
        [0, 3, 2, 3, 1, 1, 0, 0, 0, 1, 2, 0, 0, 3, 2, 3],
        [0, 3, 2, 3, 1, 1, 0, 0, 0, 1, 2, 0, 0, 1, 2, 3],
        [0, 3, 2, 3, 0, 1, 0, 0, 0, 1, 2, 0, 0, 1, 2, 3],
        [0, 3, 2, 3, 0, 1, 0, 3, 0, 1, 2, 0, 0, 1, 2, 3],
        [0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3],
    ],
    # vertices 0..15
    [
        [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3],
        [0, 0, 0, 0, 1, 1, 1, 1, 0, 2, 2, 0, 3, 3, 3, 3],
        [0, 0, 0, 1, 3, 1, 0, 1, 0, 2, 2, 1, 3, 3, 3, 3],
        [0, 0, 0, 0, 3, 1, 0, 1, 0, 2, 2, 1, 0, 0, 0, 3],
        [0, 0, 2, 0, 3, 1, 0, 1, 0, 0, 0, 0, 0, 0, 2, 3],
        [0, 0, 0, 3, 3, 1, 0, 1, 0, 0, 0, 3, 0, 0, 0, 3],
        [0, 1, 0, 3, 3, 1, 0, 1, 0, 1, 0, 3, 0, 0, 0, 3],
        [0, 1, 0, 3, 3, 1, 0, 3, 0, 1, 0, 3, 0, 0, 0, 3],
        [0, 1, 0, 3, 0, 1, 0, 3, 0, 1, 1, 3, 0, 0, 0, 3],
        [0, 1, 1, 3, 0, 1, 0, 3, 0, 1, 1, 3, 0, 1, 1, 3],
        [0, 1, 1, 3, 0, 1, 1, 3, 0, 1, 2, 3, 0, 1, 2, 3],
        [0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3],
    ],
    # vertices 0, 1, 3, 4, ..., 14
    [
        [0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3],
        [0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 1, 1],
        [2, 0, 0, 1, 1, 2, 1, 2, 2, 2, 2, 3, 1, 1],
        [1, 2, 0, 1, 1, 2, 1, 2, 2, 2, 2, 1, 1, 1],
        [1, 2, 2, 1, 1, 2, 2, 2, 1, 2, 2, 2, 1, 2],
        [1, 2, 1, 1, 1, 2, 1, 1, 1, 2, 1, 2, 1, 2],
        [1, 1, 1, 1, 1, 2, 3, 1, 1, 2, 1, 2, 1, 1],
        [2, 3, 3, 2, 1, 2, 3, 2, 1, 2, 3, 1, 1, 2],
        [0, 1, 3, 2, 1, 1, 3, 0, 1, 2, 3, 2, 1, 2],
        [0, 1, 3, 2, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2],
        [0, 1, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2],
    ],
]


def circle() -> Complex:
    return build_complex(CIRCLE_FACETS)


def wedge() -> Complex:
    return build_complex(WEDGE_FACETS)


def _cover(K: Complex, parts: list, chains: list) -> CoverCertificate:
    P = ordered_product(K, K)
    pi1, pi2 = factor_projections(P, K, K)
    out = []
    for facets, rows in zip(parts, chains):
        J = generated_subcomplex(P, facets)
        out.append(CoverPart(tuple(sorted(facets)), chain_from_rows(J, K, rows)))
    return CoverCertificate(P, pi1, pi2, tuple(out), ("pi1", "pi2"))


def circle_cover() -> CoverCertificate:
    return _cover(circle(), CIRCLE_PARTS, CIRCLE_CHAINS)


def wedge_cover() -> CoverCertificate:
    return _cover(wedge(), WEDGE_PARTS, WEDGE_CHAINS)


def write_all(directory: str | Path) -> list[Path]:
    from .formats import complex_to_json, cover_to_json, write_json

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, K, cover in (("circle", circle(), circle_cover()), ("wedge", wedge(), wedge_cover())):
        targets = {
            d / f"{name}.json": complex_to_json(K),
            d / f"{name}_cover.json": cover_to_json(cover, extra={"base": complex_to_json(K)}),
        }
        for path, obj in targets.items():
            write_json(path, obj)
            written.append(path)
    return written


if __name__ == "__main__":
    for p in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(p)
