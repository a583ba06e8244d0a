"""Batch command line front end: instance generation, spanner construction,
stretch certification, size scaling studies, and SVG rendering.

Exit codes: 0 success, 1 property violation, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import __version__
from .errors import GeospannerError, HashMismatch
from .instances import (
    generate_instance,
    graph_from_payload,
    instance_hash,
    load_instance,
    load_spanner,
    save_instance,
    save_spanner,
    spanner_payload,
)
from .render import render_svg
from .spanner import (
    SpannerParams,
    build_vftswp_polygonal_domain,
    build_vftswp_simple_polygon,
)
from .verify import certify_stretch, size_scaling_report

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _resolve_seed(value):
    if value is not None:
        return int(value)
    env = os.environ.get("GEOSPANNER_SEED")
    if env is not None:
        return int(env)
    return None


def cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    instance = generate_instance(args.n, args.holes, args.polygon_vertices,
                                 args.weight_dist, seed)
    if args.k is not None:
        instance.generator["k"] = int(args.k)
    save_instance(instance, args.out)
    print(f"wrote {args.out}: n={instance.n} h={instance.h} seed={seed}")
    return EXIT_OK


def cmd_build(args) -> int:
    instance = load_instance(args.input)
    params = SpannerParams(k=args.k, epsilon=args.eps)
    mode = args.mode
    if mode == "auto":
        mode = "simple" if instance.h == 0 else "domain"
    if mode == "simple" and instance.h > 0:
        raise GeospannerError("mode 'simple' requires an instance without holes")
    t0 = time.perf_counter()
    if mode == "simple":
        graph = build_vftswp_simple_polygon(instance.domain.outer,
                                            instance.points, params)
    else:
        graph = build_vftswp_polygonal_domain(instance.domain,
                                              instance.points, params)
    elapsed = time.perf_counter() - t0
    payload = spanner_payload(graph, instance, params.k, params.epsilon, mode,
                              seed=instance.seed, tool_version=__version__)
    save_spanner(payload, args.out)
    print(f"n={instance.n} h={instance.h} k={params.k} eps={params.epsilon} "
          f"edges={graph.edge_count()} time={elapsed:.3f}s")
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    payload = load_spanner(args.spanner)
    if payload["provenance"]["instance_sha256"] != instance_hash(instance):
        raise HashMismatch("spanner was built from a different instance file")
    graph = graph_from_payload(payload)
    params = SpannerParams(k=int(payload["k"]), epsilon=float(payload["epsilon"]))
    if args.target == "auto":
        base = math.sqrt(10.0) if payload["mode"] == "simple" else 6.0
        target = base + params.epsilon
    else:
        target = float(args.target)
    budget = "exhaustive" if args.samples is None else int(args.samples)
    report = certify_stretch(graph, instance, params, budget)
    ok = report.ok(target)
    out = {
        "max_stretch": report.max_stretch,
        "target": target,
        "ok": bool(ok),
        "witness": None if report.witness is None else {
            "faults": list(report.witness[0]),
            "p": report.witness[1],
            "q": report.witness[2],
        },
        "pairs_checked": report.pairs_checked,
        "fault_sets_checked": report.fault_sets_checked,
        "exhaustive": report.exhaustive,
        "all_reachable": report.all_reachable,
        "unreachable": None if report.unreachable is None else {
            "faults": list(report.unreachable[0]),
            "p": report.unreachable[1],
            "q": report.unreachable[2],
        },
        "lower_bound_ok": report.lower_bound_ok,
    }
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_stats(args) -> int:
    if args.mode == "simple":
        n_list = [int(x) for x in args.n_list.split(",") if x]
        rows = size_scaling_report(args.seed, n_list, args.k, args.eps,
                                   mode="simple",
                                   polygon_vertices=args.polygon_vertices)
    else:
        h_list = [int(x) for x in args.h_list.split(",") if x]
        rows = size_scaling_report(args.seed, [], args.k, args.eps,
                                   mode="domain", h_list=h_list,
                                   n_fixed=args.n,
                                   polygon_vertices=args.polygon_vertices)
    print(json.dumps(rows, sort_keys=True))
    return EXIT_OK


def cmd_render(args) -> int:
    instance = load_instance(args.instance)
    graph = None
    if args.spanner:
        payload = load_spanner(args.spanner)
        if payload["provenance"]["instance_sha256"] != instance_hash(instance):
            raise HashMismatch("spanner was built from a different instance file")
        graph = graph_from_payload(payload)
    faults = [int(x) for x in args.faults.split(",") if x] if args.faults else []
    svg = render_svg(instance, graph, faults)
    with open(args.out, "w") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geospanner",
        description="Vertex fault-tolerant geodesic spanners for weighted points")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None,
                   help="stored as generator metadata only")
    p.add_argument("--holes", type=int, default=0)
    p.add_argument("--polygon-vertices", type=int, default=12)
    p.add_argument("--weight-dist", choices=["zero", "uniform01", "exp"],
                   default="uniform01")
    p.add_argument("--seed", type=int, default=None,
                   help="falls back to GEOSPANNER_SEED")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build a fault-tolerant spanner")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--mode", choices=["auto", "simple", "domain"], default="auto")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="certify the fault-tolerant stretch")
    p.add_argument("--instance", required=True)
    p.add_argument("--spanner", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true", default=True)
    group.add_argument("--samples", type=int, default=None)
    p.add_argument("--target", default="auto")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="size scaling study")
    p.add_argument("--mode", choices=["simple", "domain"], default="simple")
    p.add_argument("--n-list", default="64,128,256,512,1024")
    p.add_argument("--h-list", default="0,1,4,9")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--polygon-vertices", type=int, default=16)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="render instance and spanner to SVG")
    p.add_argument("--instance", required=True)
    p.add_argument("--spanner", default=None)
    p.add_argument("--faults", default="")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GeospannerError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
