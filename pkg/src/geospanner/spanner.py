"""Construction of vertex fault-tolerant spanners for weighted points.

Two builders share one edge-selection core driven by semi-separated pair
decompositions of points projected onto splitting segments:

* simple polygons: recursive balanced polygon cutting, a 4/epsilon SSPD per
  chord, stretch sqrt(10) + epsilon;
* polygonal domains: vertical decomposition, a weighted planar separator on
  the face dual, an 8/epsilon SSPD per collected cut, stretch 6 + epsilon,
  delegating to the simple-polygon recursion inside single faces.

Edge weights are geodesic distances in the full input domain; projections use
geodesics of the current recursion region, which never underestimates the
metric for the pairs that region is responsible for.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .decomposition import _components, decompose_domain, planar_separator
from .errors import DegenerateInput, UnknownId
from .geodesic import (
    DomainRegion,
    FaceSetRegion,
    GeodesicEngine,
    PolygonalDomain,
    PolygonRegion,
)
from .geometry import SimplePolygon, WeightedPoint, balanced_cut
from .sspd import SspdDecomposition, build_sspd


@dataclass(frozen=True)
class SpannerParams:
    k: int
    epsilon: float

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"fault budget k must be a non-negative integer, got {self.k}")
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must satisfy 0 < eps <= 1, got {self.epsilon}")


class SpannerGraph:
    """Undirected graph over point ids; each edge weighted by the geodesic
    distance between its endpoints."""

    def __init__(self, n: int):
        self.n = n
        self.edges: dict[tuple[int, int], float] = {}

    def add_edge(self, u: int, v: int, length: float) -> None:
        if u == v:
            return
        key = (u, v) if u < v else (v, u)
        if key not in self.edges:
            self.edges[key] = length

    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int, float]]:
        return [(u, v, self.edges[(u, v)]) for u, v in sorted(self.edges)]

    def adjacency(self) -> dict[int, list[tuple[int, float]]]:
        adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(self.n)}
        for (u, v), w in self.edges.items():
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def __eq__(self, other) -> bool:
        return isinstance(other, SpannerGraph) and self.n == other.n \
            and self.edges == other.edges


def include_edges_using_sspd(dec: SspdDecomposition, k: int, graph: SpannerGraph,
                             augmented_weight: Mapping[int, float],
                             edge_length: Callable[[np.ndarray], np.ndarray]) -> SpannerGraph:
    """Add edges for every decomposition pair: all cross edges when the
    smaller-radius side has fewer than k+1 points, otherwise edges from every
    point of the pair to the k+1 points of the smaller side with the least
    augmented weight (ties by id)."""
    wanted: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    def push(u: int, v: int):
        if u == v:
            return
        key = (u, v) if u < v else (v, u)
        if key not in seen and key not in graph.edges:
            seen.add(key)
            wanted.append(key)

    for pair in dec.pairs:
        if pair.radius_a <= pair.radius_b:
            small, big = pair.a, pair.b
        else:
            small, big = pair.b, pair.a
        for pid in small + big:
            if pid not in augmented_weight:
                raise UnknownId(f"pair references id {pid} with no augmented weight")
        if len(small) < k + 1:
            for u in small:
                for v in big:
                    push(u, v)
        else:
            core = sorted(small, key=lambda pid: (augmented_weight[pid], pid))[:k + 1]
            for v in core:
                for u in small + big:
                    push(u, v)
    if wanted:
        lengths = edge_length(np.asarray(wanted, dtype=int))
        for (u, v), w in zip(wanted, lengths):
            graph.add_edge(u, v, float(w))
    return graph


@dataclass
class _BuildContext:
    points: Sequence[WeightedPoint]
    positions: np.ndarray
    params: SpannerParams
    graph: SpannerGraph
    global_engine: GeodesicEngine
    decomposition: object = None

    def edge_length(self, pairs: np.ndarray) -> np.ndarray:
        return self.global_engine.point_point_many(pairs)


def _validate_points(pts: Sequence[WeightedPoint]) -> np.ndarray:
    ids = sorted(wp.id for wp in pts)
    if ids != list(range(len(pts))):
        raise DegenerateInput("point ids must be unique and contiguous from 0")
    if any(wp.weight < 0 for wp in pts):
        raise DegenerateInput("point weights must be non-negative")
    ordered = sorted(pts, key=lambda wp: wp.id)
    positions = np.asarray([wp.pos for wp in ordered], dtype=float)
    if len({wp.pos for wp in pts}) != len(pts):
        raise DegenerateInput("point positions must be pairwise distinct")
    return positions


def _project_onto(engine: GeodesicEngine, ctx: _BuildContext, ids: list[int], seg):
    """Project the given global point ids onto seg within the engine's region;
    returns projections carrying global ids, plus the augmented-weight map."""
    weights = [ctx.points[g].weight for g in ids]
    projs = engine.project_segment(seg, list(range(len(ids))), weights)
    remapped = [p._replace(source_id=ids[p.source_id]) for p in projs]
    aug = {p.source_id: p.augmented_weight for p in remapped}
    return remapped, aug


def _simple_recursion(poly: SimplePolygon, ids: list[int], ctx: _BuildContext) -> None:
    if len(ids) <= 1:
        return
    pts = [ctx.points[i] for i in ids]
    cut = balanced_cut(poly, pts)
    engine = GeodesicEngine(PolygonRegion(poly), ctx.positions[ids])
    projected, aug = _project_onto(engine, ctx, ids, cut.chord)
    dec = build_sspd(projected, 4.0 / ctx.params.epsilon)
    include_edges_using_sspd(dec, ctx.params.k, ctx.graph, aug, ctx.edge_length)
    _simple_recursion(cut.left_polygon, sorted(cut.left_points), ctx)
    _simple_recursion(cut.right_polygon, sorted(cut.right_points), ctx)


def build_vftswp_simple_polygon(poly: SimplePolygon, pts: Sequence[WeightedPoint],
                                params: SpannerParams) -> SpannerGraph:
    """Fault-tolerant spanner with stretch sqrt(10) + epsilon for weighted
    points in a simple polygon."""
    poly.validate()
    positions = _validate_points(pts)
    graph = SpannerGraph(len(pts))
    if len(pts) <= 1:
        return graph
    ctx = _BuildContext(
        points=sorted(pts, key=lambda wp: wp.id),
        positions=positions,
        params=params,
        graph=graph,
        global_engine=GeodesicEngine(PolygonRegion(poly), positions),
    )
    _simple_recursion(poly, list(range(len(pts))), ctx)
    return graph


def _domain_recursion(face_ids: list[int], ids: list[int], ctx: _BuildContext) -> None:
    if len(ids) <= 1:
        return
    dec = ctx.decomposition
    if len(face_ids) == 1:
        _simple_recursion(dec.faces[face_ids[0]], ids, ctx)
        return
    sub_adj = {f: {g for g in dec.adjacency[f] if g in face_ids} for f in face_ids}
    sub_w = {f: 0 for f in face_ids}
    for pid in ids:
        sub_w[dec.point_face[pid]] += 1
    sep = planar_separator(sub_adj, sub_w)

    cut_ids = sorted({cid for f in sep.r for cid in dec.face_cuts[f]})
    if cut_ids:
        region = FaceSetRegion([dec.faces[f] for f in sorted(face_ids)])
        engine = GeodesicEngine(region, ctx.positions[ids])
        for cid in cut_ids:
            seg = dec.cut_segments[cid]
            projected, aug = _project_onto(engine, ctx, ids, seg)
            sspd = build_sspd(projected, 8.0 / ctx.params.epsilon)
            include_edges_using_sspd(sspd, ctx.params.k, ctx.graph, aug,
                                     ctx.edge_length)
    # Points in separator faces never reach a recursive call, so pairs whose
    # shortest path stays inside such a face are handled in-face here.
    for f in sorted(sep.r):
        f_ids = [i for i in ids if dec.point_face[i] == f]
        _simple_recursion(dec.faces[f], f_ids, ctx)
    for side in (sep.p, sep.q):
        if not side:
            continue
        for comp in _components(side, sub_adj, frozenset()):
            comp_ids = [i for i in ids if dec.point_face[i] in set(comp)]
            _domain_recursion(sorted(comp), comp_ids, ctx)


def build_vftswp_polygonal_domain(domain: PolygonalDomain,
                                  pts: Sequence[WeightedPoint],
                                  params: SpannerParams) -> SpannerGraph:
    """Fault-tolerant spanner with stretch 6 + epsilon for weighted points in
    the free space of a polygonal domain; h = 0 delegates to the simple case."""
    if domain.h == 0:
        return build_vftswp_simple_polygon(domain.outer, pts, params)
    positions = _validate_points(pts)
    graph = SpannerGraph(len(pts))
    if len(pts) <= 1:
        return graph
    ordered = sorted(pts, key=lambda wp: wp.id)
    decomposition = decompose_domain(domain, ordered)
    ctx = _BuildContext(
        points=ordered,
        positions=positions,
        params=params,
        graph=graph,
        global_engine=GeodesicEngine(DomainRegion(domain), positions),
        decomposition=decomposition,
    )
    _domain_recursion(list(range(len(decomposition.faces))),
                      list(range(len(pts))), ctx)
    return graph
