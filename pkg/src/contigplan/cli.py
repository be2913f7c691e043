"""``contigplan`` command line.

Exit codes: 0 success, 1 verification failure or uncovered point, 2 invalid
input (including resource limits), 3 no run reached the target part count
before its budget ran out (a best-effort report is still written).

Input paths of the form ``fixture:NAME`` refer to the bundled data files
(``circle``, ``circle_cover``, ``wedge``, ``wedge_cover``).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .complex_core import (
    Complex,
    ComplexError,
    SimplicialMap,
    axial_inclusions,
    factor_projections,
    ordered_product,
)
from .contiguity import verify_chain, verify_cover
from .formats import (
    FormatError,
    chain_from_json,
    chain_to_tsv,
    complex_from_json,
    complex_to_json,
    cover_from_json,
    cover_to_json,
    dumps,
    point_to_json,
    read_json,
    resolve_map,
)
from .planner import (
    BarycentricPoint,
    PlannerSystem,
    ResourceLimitError,
    SubdivisionTower,
    UncoveredPointError,
    estimate_distance_subdivided,
)
from .search import VARIANTS, SearchParams

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_TARGET_MISSED = 3


class InputError(ValueError):
    pass


def _open_input(path: str) -> Any:
    if path.startswith("fixture:"):
        name = path.split(":", 1)[1]
        ref = resources.files("contigplan") / "data" / f"{name}.json"
        if not ref.is_file():
            raise InputError(f"no bundled fixture named {name!r}")
        return json.loads(ref.read_text(encoding="utf-8"))
    if not Path(path).is_file():
        raise InputError(f"{path}: no such file")
    return read_json(path)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def parse_seeds(text: str) -> list[int]:
    """``"1-5"``, ``"3,7,9"`` or a mix such as ``"1-3,10"``."""
    seeds: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition("-")
        try:
            if sep:
                a, b = int(lo), int(hi)
                if b < a:
                    raise InputError(f"empty seed range {chunk!r}")
                seeds.extend(range(a, b + 1))
            else:
                seeds.append(int(chunk))
        except ValueError:
            raise InputError(f"bad seed list {text!r}") from None
    if not seeds:
        raise InputError("seed list is empty")
    return list(dict.fromkeys(seeds))


def parse_point(text: str) -> BarycentricPoint:
    """A vertex ``"3"`` or weights ``"0:1/2,1:1/2"`` (fractions or decimals)."""
    text = text.strip()
    try:
        if ":" not in text:
            return BarycentricPoint.vertex(int(text))
        pairs = []
        for item in text.split(","):
            v, w = item.split(":")
            pairs.append((int(v), Fraction(w.strip())))
        return BarycentricPoint.make(pairs)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read point {text!r}: {exc}") from None


# estimation


@dataclass
class RunConfig:
    kind: str
    domain: dict
    codomain: dict
    phi: list[int]
    phi_prime: list[int]
    labels: tuple[str, str]
    params: dict
    depth: int = 0
    base_vertex: int | None = None
    extra: dict = field(default_factory=dict)


def _run_seed(cfg: RunConfig, seed: int) -> tuple[int, dict, dict]:
    """One single-seed estimation; top level so worker processes can pickle it."""
    domain = complex_from_json(cfg.domain)
    codomain = complex_from_json(cfg.codomain)
    phi = SimplicialMap(domain, codomain, tuple(cfg.phi))
    phi_prime = SimplicialMap(domain, codomain, tuple(cfg.phi_prime))
    params = SearchParams(**{**cfg.params, "seed": seed})
    report = estimate_distance_subdivided(phi, phi_prime, cfg.depth, params, labels=cfg.labels)
    cert = report.certificate
    if not verify_cover(cert):
        raise AssertionError(f"seed {seed} produced a cover that does not verify")
    base = cfg.base_vertex if "iota1" in cert.labels or "iota2" in cert.labels else None
    return seed, cover_to_json(cert, base, cfg.extra or None), report.run_report()


def _map_arg(text: str, domain: Complex, codomain: Complex, base: int | None) -> SimplicialMap:
    if Path(text).is_file() or text.startswith("fixture:"):
        data = _open_input(text)
        if isinstance(data, dict):
            data = data.get("map", data.get("assignment"))
        return resolve_map(data, domain, codomain, base)
    return resolve_map(text, domain, codomain, base)


def build_config(args: argparse.Namespace) -> RunConfig:
    params = dict(
        M=args.M, r=args.r, N=args.N, t=args.t, variant=args.variant,
        time_budget=args.time_budget, warm_start=args.warm_start,
    )
    SearchParams(**params)
    if args.kind in ("sc", "cat"):
        K = complex_from_json(_open_input(args.complex))
        if args.kind == "sc":
            P = ordered_product(K, K)
            phi, phi_prime = factor_projections(P, K, K)
            labels = ("pi1", "pi2")
            base = None
        else:
            base = args.base if args.base is not None else K.vertices[0]
            if base not in K.vertex_index:
                raise InputError(f"base vertex {base} is not a vertex of the complex")
            phi, phi_prime = axial_inclusions(K, base)
            labels = ("iota1", "iota2")
        extra = {"base": complex_to_json(K)}
    else:
        if not args.codomain or args.phi is None or args.phi_prime is None:
            raise InputError("estimate distance needs DOMAIN, --codomain, --phi and --phi-prime")
        domain = complex_from_json(_open_input(args.complex))
        codomain = complex_from_json(_open_input(args.codomain))
        base = args.base
        phi = _map_arg(args.phi, domain, codomain, base)
        phi_prime = _map_arg(args.phi_prime, domain, codomain, base)
        labels = tuple(s if not (Path(s).is_file() or s.startswith("fixture:")) else "explicit"
                       for s in (args.phi, args.phi_prime))
        extra = {}
    return RunConfig(
        kind=args.kind,
        domain=complex_to_json(phi.domain),
        codomain=complex_to_json(phi.codomain),
        phi=list(phi.assignment),
        phi_prime=list(phi_prime.assignment),
        labels=labels,  # type: ignore[arg-type]
        params=params,
        depth=args.depth,
        base_vertex=base,
        extra=extra,
    )


def run_seeds(cfg: RunConfig, seeds: list[int], jobs: int = 1) -> list[tuple[int, dict, dict]]:
    if jobs <= 1 or len(seeds) == 1:
        return [_run_seed(cfg, s) for s in seeds]
    with ProcessPoolExecutor(max_workers=min(jobs, len(seeds))) as pool:
        return list(pool.map(_run_seed, [cfg] * len(seeds), seeds))


def pick_best(results: list[tuple[int, dict, dict]]) -> tuple[int, dict, dict]:
    """Fewest parts wins, ties go to the lowest seed."""
    return min(results, key=lambda res: (len(res[1]["parts"]), res[0]))


def cmd_estimate(args: argparse.Namespace) -> int:
    if args.seeds is None:
        seeds = [random.SystemRandom().randrange(2**31)]
    else:
        seeds = parse_seeds(args.seeds)
    cfg = build_config(args)
    if args.depth:
        # fail fast on the guard before spawning workers
        SubdivisionTower.build(complex_from_json(cfg.domain), args.depth)
    print(f"seeds: {' '.join(map(str, seeds))}", flush=True)
    jobs = args.jobs if args.jobs is not None else min(len(seeds), os.cpu_count() or 1)
    results = run_seeds(cfg, seeds, jobs)
    for seed, cover, report in sorted(results):
        print(f"seed {seed}: bound {report['bound']} parts {report['part_sizes']} ({report['elapsed_ms'] / 1000:.2f} s)")
    seed, cover, report = pick_best(results)
    reached = any(r["reached_target"] for _, _, r in results)
    print(f"best: seed {seed} bound {report['bound']} parts {report['part_sizes']}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "cover.json").write_text(dumps(cover) + "\n", encoding="utf-8")
        summary = {**report, "kind": cfg.kind, "depth": cfg.depth, "runs": [r for _, _, r in sorted(results)]}
        (out / "report.json").write_text(dumps(summary) + "\n", encoding="utf-8")
        print(f"wrote {out / 'cover.json'} and {out / 'report.json'}")
    if not reached:
        print(f"no run reached the target of {args.t} parts", file=sys.stderr)
        return EXIT_TARGET_MISSED
    return EXIT_OK


# verification


def cmd_verify(args: argparse.Namespace) -> int:
    data = _open_input(args.file)
    if args.kind == "chain":
        chain = chain_from_json(data)
        start = end = None
        base = data.get("base_vertex") if isinstance(data, dict) else None
        if isinstance(data, dict) and "start" in data:
            start = resolve_map(data["start"], chain.domain, chain.codomain, base)
        if isinstance(data, dict) and "end" in data:
            end = resolve_map(data["end"], chain.domain, chain.codomain, base)
        result = verify_chain(chain, start, end)
        what = f"chain of {chain.length + 1} maps"
    else:
        cert = cover_from_json(data)
        result = verify_cover(cert)
        what = f"cover with parts {cert.part_sizes()}"
    if result:
        print(f"ok: {what}")
        return EXIT_OK
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    print(f"FAILED: {what}", file=sys.stderr)
    return EXIT_FAILED


# build


def cmd_build(args: argparse.Namespace) -> int:
    if args.kind == "product":
        if len(args.inputs) != 2:
            raise InputError("build product needs two complex files")
        K, L = (complex_from_json(_open_input(p)) for p in args.inputs)
        out = complex_to_json(ordered_product(K, L), product_of=args.inputs)
    else:
        if len(args.inputs) != 1:
            raise InputError("build subdivide needs one complex file")
        K = complex_from_json(_open_input(args.inputs[0]))
        out = complex_to_json(SubdivisionTower.build(K, args.depth).top)
    _emit(dumps(out) + "\n", args.out)
    return EXIT_OK


# planning


def load_system(data: Any, base_path: str | None = None) -> PlannerSystem:
    cert = cover_from_json(data)
    if base_path is not None:
        base = complex_from_json(_open_input(base_path))
    elif isinstance(data, dict) and "base" in data:
        base = complex_from_json(data["base"])
    else:
        base = cert.codomain
    return PlannerSystem.from_certificate(base, cert)


def cmd_plan(args: argparse.Namespace) -> int:
    from .planner import plan_path

    system = load_system(_open_input(args.system), args.base)
    a, b = parse_point(args.a), parse_point(args.b)
    carrier = None
    if args.carrier:
        try:
            carrier = [int(x) for x in args.carrier.split(",")]
        except ValueError:
            raise InputError(f"bad carrier {args.carrier!r}") from None
    try:
        path = plan_path(system, a, b, carrier, args.part)
    except UncoveredPointError as exc:
        print(f"uncovered: {exc}", file=sys.stderr)
        print("hint: drop --part, or pass --carrier with a simplex of the product", file=sys.stderr)
        return EXIT_FAILED
    _emit(dumps([point_to_json(x) for x in path]) + "\n", args.out)
    if args.out:
        print(f"{len(path)} waypoints written to {args.out}")
    return EXIT_OK


def cmd_export_table(args: argparse.Namespace) -> int:
    data = _open_input(args.file)
    if isinstance(data, dict) and "parts" in data:
        cert = cover_from_json(data)
        if not 0 <= args.part < len(cert.parts):
            raise InputError(f"cover has {len(cert.parts)} parts, no part {args.part}")
        chain = cert.parts[args.part].chain
    else:
        chain = chain_from_json(data)
    _emit(chain_to_tsv(chain, pair_labels=args.pairs), args.out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="contigplan", description="Contiguity distance bounds and PL motion planners.")
    sub = p.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="bound SC, cat or a contiguity distance")
    est.add_argument("kind", choices=["sc", "cat", "distance"])
    est.add_argument("complex", help="complex JSON (the domain for 'distance')")
    est.add_argument("--codomain")
    est.add_argument("--phi", help="map identifier or JSON file")
    est.add_argument("--phi-prime", dest="phi_prime")
    est.add_argument("--base", type=int, help="base vertex for cat and inclusions")
    est.add_argument("--M", type=int, default=1000)
    est.add_argument("--r", type=float, default=0.1)
    est.add_argument("--N", type=int, default=500)
    est.add_argument("--t", type=int, default=2)
    est.add_argument("--depth", type=int, default=0, help="barycentric subdivisions of the domain")
    est.add_argument("--seeds", help="e.g. 1-5 or 1,4,9; random if omitted")
    est.add_argument("--variant", choices=VARIANTS, default="neighborhood")
    est.add_argument("--time-budget", dest="time_budget", type=float, help="seconds per seed")
    est.add_argument("--warm-start", dest="warm_start", action="store_true")
    est.add_argument("--jobs", type=int)
    est.add_argument("--out", help="directory for cover.json and report.json")
    est.set_defaults(func=cmd_estimate)

    ver = sub.add_parser("verify", help="check a chain or cover certificate")
    ver.add_argument("kind", choices=["chain", "cover"])
    ver.add_argument("file")
    ver.set_defaults(func=cmd_verify)

    bld = sub.add_parser("build", help="ordered product or barycentric subdivision")
    bld.add_argument("kind", choices=["product", "subdivide"])
    bld.add_argument("inputs", nargs="+")
    bld.add_argument("--depth", type=int, default=1)
    bld.add_argument("--out")
    bld.set_defaults(func=cmd_build)

    pl = sub.add_parser("plan", help="waypoints of the planner covering (a, b)")
    pl.add_argument("system", help="cover JSON of K x K for pi1, pi2")
    pl.add_argument("--a", required=True)
    pl.add_argument("--b", required=True)
    pl.add_argument("--base", help="complex K, if the system file does not embed it")
    pl.add_argument("--carrier", help="comma separated simplex of K x K containing (a, b)")
    pl.add_argument("--part", type=int)
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plan)

    ex = sub.add_parser("export-table", help="chain as a TSV table")
    ex.add_argument("file", help="chain JSON or cover JSON")
    ex.add_argument("--part", type=int, default=0)
    ex.add_argument("--pairs", action="store_true", help="label product vertices as (i, j)")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_export_table)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, ResourceLimitError, ComplexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
