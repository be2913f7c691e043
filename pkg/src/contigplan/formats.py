"""JSON and TSV formats for complexes, maps, chains and covers.

Complex:  {"vertex_count": n, "facets": [[...], ...]} with optional
          "vertices" (sparse subcomplexes), "product_of" and "codec".
Chain:    {"domain": complex, "codomain": complex, "maps": [[...], ...]}
Cover:    {"domain", "codomain", "psi", "psi_prime", "parts": [{"facets", "maps"}]}
          where psi/psi_prime are identifiers ("pi1", "pi2", "iota1", "iota2",
          "identity", "constant:v") or explicit assignment arrays.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

from .complex_core import Complex, ComplexError, ProductVertexCodec, SimplicialMap, Simplex, build_complex
from .complex_core import _from_facets, _normalize
from .contiguity import ContiguityChain, CoverCertificate, CoverPart


class FormatError(ValueError):
    """Input file does not match the expected JSON layout."""


def dumps(obj: Any, indent: int = 0) -> str:
    """JSON with one key per line and flat lists kept inline, for readable diffs."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(f'{pad}  {json.dumps(k)}: {dumps(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        if all(isinstance(x, list) and not any(isinstance(y, (dict, list)) for y in x) for x in obj):
            if len(obj) <= 64:
                inner = ",\n".join(pad + "  " + json.dumps(x, separators=(", ", ": ")) for x in obj)
                return "[\n" + inner + "\n" + pad + "]"
        inner = ",\n".join(pad + "  " + dumps(x, indent + 1) for x in obj)
        return "[\n" + inner + "\n" + pad + "]"
    return json.dumps(obj, separators=(", ", ": "))


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from exc


def complex_to_json(K: Complex, product_of: Sequence[str] | None = None) -> dict:
    out: dict[str, Any] = {"vertex_count": K.vertex_count, "facets": [list(f) for f in K.facets]}
    if not K.is_dense():
        out["vertices"] = list(K.vertices)
    if K.codec is not None:
        if product_of is not None:
            out["product_of"] = list(product_of)
        out["codec"] = K.codec.right_vertex_count
        out["codec_left"] = K.codec.left_vertex_count
    return out


def complex_from_json(data: Any) -> Complex:
    if not isinstance(data, dict) or "facets" not in data:
        raise FormatError("a complex needs a 'facets' list")
    facets = data["facets"]
    if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
        raise FormatError("'facets' must be a list of integer lists")
    codec = None
    if "codec" in data:
        n = int(data["codec"])
        left = int(data.get("codec_left", -(-int(data.get("vertex_count", 0)) // n)))
        codec = ProductVertexCodec(left, n)
    try:
        if "vertices" in data:
            K = _from_facets(_normalize(facets), codec)
            if list(K.vertices) != sorted(data["vertices"]):
                raise FormatError("'vertices' does not match the vertices occurring in facets")
        else:
            K = build_complex(facets)
            if codec is not None:
                K = Complex(K.vertices, K.facets, codec)
    except ComplexError as exc:
        raise FormatError(str(exc)) from exc
    if "vertex_count" in data and int(data["vertex_count"]) != K.vertex_count:
        raise FormatError(f"vertex_count {data['vertex_count']} does not match the facets ({K.vertex_count})")
    return K


def load_complex(path: str | Path) -> Complex:
    return complex_from_json(read_json(path))


def resolve_map(spec: Any, domain: Complex, codomain: Complex, base_vertex: int | None = None) -> SimplicialMap:
    """Turn an identifier or explicit array into a map ``domain -> codomain``."""
    if isinstance(spec, list):
        return SimplicialMap(domain, codomain, tuple(int(x) for x in spec))
    if not isinstance(spec, str):
        raise FormatError(f"cannot interpret map {spec!r}")
    if spec in ("pi1", "pi2"):
        if domain.codec is None:
            raise FormatError(f"'{spec}' needs a product domain")
        side = 0 if spec == "pi1" else 1
        return SimplicialMap.from_function(domain, codomain, lambda v: domain.codec.decode(v)[side])
    if spec in ("iota1", "iota2"):
        if codomain.codec is None:
            raise FormatError(f"'{spec}' needs a product codomain")
        if base_vertex is None:
            raise FormatError(f"'{spec}' needs a base vertex")
        enc = codomain.codec.encode
        if spec == "iota1":
            return SimplicialMap.from_function(domain, codomain, lambda v: enc(v, base_vertex))
        return SimplicialMap.from_function(domain, codomain, lambda v: enc(base_vertex, v))
    if spec == "identity":
        return SimplicialMap(domain, codomain, domain.vertices)
    if spec.startswith("constant:"):
        return SimplicialMap.constant(domain, codomain, int(spec.split(":", 1)[1]))
    raise FormatError(f"unknown map identifier {spec!r}")


def chain_to_json(chain: ContiguityChain) -> dict:
    return {
        "domain": complex_to_json(chain.domain),
        "codomain": complex_to_json(chain.codomain),
        "maps": [list(m.assignment) for m in chain.maps],
    }


def chain_from_json(data: Any) -> ContiguityChain:
    try:
        domain = complex_from_json(data["domain"])
        codomain = complex_from_json(data["codomain"])
        rows = data["maps"]
        return ContiguityChain(tuple(SimplicialMap(domain, codomain, tuple(r)) for r in rows))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed chain: {exc}") from exc
    except ComplexError as exc:
        raise FormatError(str(exc)) from exc


def _map_field(label: str, m: SimplicialMap) -> Any:
    return label if label != "explicit" else list(m.assignment)


def cover_to_json(cert: CoverCertificate, base_vertex: int | None = None, extra: dict | None = None) -> dict:
    out: dict[str, Any] = {
        "domain": complex_to_json(cert.domain),
        "codomain": complex_to_json(cert.codomain),
        "psi": _map_field(cert.labels[0], cert.psi),
        "psi_prime": _map_field(cert.labels[1], cert.psi_prime),
    }
    if base_vertex is not None:
        out["base_vertex"] = base_vertex
    out["bound"] = cert.bound
    out["parts"] = [
        {"facets": [list(f) for f in p.facets], "maps": [list(m.assignment) for m in p.chain.maps]}
        for p in cert.parts
    ]
    if extra:
        out.update(extra)
    return out


def cover_from_json(data: Any) -> CoverCertificate:
    from .complex_core import generated_subcomplex

    try:
        domain = complex_from_json(data["domain"])
        codomain = complex_from_json(data["codomain"])
        base = data.get("base_vertex")
        psi = resolve_map(data["psi"], domain, codomain, base)
        psi_prime = resolve_map(data["psi_prime"], domain, codomain, base)
        parts = []
        for raw in data["parts"]:
            facets: tuple[Simplex, ...] = tuple(tuple(sorted(f)) for f in raw["facets"])
            J = generated_subcomplex(domain, facets)
            chain = ContiguityChain(tuple(SimplicialMap(J, codomain, tuple(r)) for r in raw["maps"]))
            parts.append(CoverPart(facets, chain))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed cover: {exc}") from exc
    except ComplexError as exc:
        raise FormatError(str(exc)) from exc
    labels = tuple(x if isinstance(x, str) else "explicit" for x in (data["psi"], data["psi_prime"]))
    return CoverCertificate(domain, psi, psi_prime, tuple(parts), labels)  # type: ignore[arg-type]


def chain_to_tsv(chain: ContiguityChain, pair_labels: bool = False) -> str:
    """Rows are the maps of the chain, columns the domain vertices."""
    codec = chain.domain.codec
    if pair_labels and codec is not None:
        heads = ["({}, {})".format(*codec.decode(v)) for v in chain.domain.vertices]
    else:
        heads = [str(v) for v in chain.domain.vertices]
    lines = ["\t".join(["", *heads])]
    for k, m in enumerate(chain.maps):
        lines.append("\t".join([f"phi_{k}", *map(str, m.assignment)]))
    return "\n".join(lines) + "\n"


def point_to_json(x) -> dict:
    return {
        "carrier": list(x.carrier),
        "weights": [str(w) for w in x.weights],
        "decimal": [float(w) for w in x.weights],
    }
