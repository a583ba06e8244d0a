"""Vertical decomposition of a polygonal domain into O(h) simple faces, the
weighted face dual, and balanced planar separators.

Each hole shoots vertical splitting segments up and down from its leftmost and
rightmost vertices until the domain boundary.  Faces of the resulting planar
subdivision are recovered by an angular half-edge walk.  Faces bounded by more
than three cuts are refined with balancing diagonals so the separator step can
collect a small candidate set of cuts per face.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .errors import DegenerateDomain, NotPlanar
from .geodesic import PolygonalDomain
from .geometry import (
    Point2,
    SimplePolygon,
    SplitSegment,
    WeightedPoint,
    on_segment,
    polygon_signed_area,
    segments_properly_cross,
)


@dataclass
class DomainDecomposition:
    faces: list[SimplePolygon]
    cut_segments: list[SplitSegment]       # vertical shots, then refinement chords
    cut_is_shot: list[bool]
    face_cuts: list[frozenset[int]]        # cut ids bounding each face
    adjacency: dict[int, set[int]]         # face dual graph
    weights: list[int]                     # points per face
    point_face: dict[int, int]

    @property
    def split_segments(self) -> list[SplitSegment]:
        return [s for s, shot in zip(self.cut_segments, self.cut_is_shot) if shot]


@dataclass(frozen=True)
class SeparatorPartition:
    p: frozenset[int]
    q: frozenset[int]
    r: frozenset[int]


# ---------------------------------------------------------------------------
# Vertical splitting segments.


def _extreme_shot_origins(hole: SimplePolygon):
    """(vertex, direction) pairs: up from the top of the leftmost/rightmost
    chains, down from their bottoms."""
    verts = hole.vertices
    min_x = min(v.x for v in verts)
    max_x = max(v.x for v in verts)
    out = []
    for x_val in (min_x, max_x):
        chain = [v for v in verts if v.x == x_val]
        top = max(chain, key=lambda v: v.y)
        bottom = min(chain, key=lambda v: v.y)
        out.append((top, +1))
        out.append((bottom, -1))
    return out


def _vertical_ray_hit(domain: PolygonalDomain, origin: Point2, direction: int):
    """Nearest boundary point straight above/below origin, excluding the origin
    itself; returns (point, loop_idx, edge_idx, param) with vertex snapping."""
    loops = [domain.outer] + list(domain.holes)
    best = None
    for li, loop in enumerate(loops):
        verts = loop.vertices
        m = len(verts)
        for ei in range(m):
            a = verts[ei]
            b = verts[(ei + 1) % m]
            if a == origin or b == origin:
                continue
            lo, hi = min(a.x, b.x), max(a.x, b.x)
            if not (lo <= origin.x <= hi):
                continue
            if a.x == b.x:
                ys = sorted((a.y, b.y))
                cand = ys[0] if direction > 0 else ys[1]
                if (cand - origin.y) * direction <= 1e-12:
                    continue
                y_hit = cand
                u = 0.0 if (a.y == y_hit) else 1.0
            else:
                u = (origin.x - a.x) / (b.x - a.x)
                y_hit = a.y + u * (b.y - a.y)
                if (y_hit - origin.y) * direction <= 1e-12:
                    continue
            dist = abs(y_hit - origin.y)
            if best is None or dist < best[0]:
                if u < 1e-9:
                    best = (dist, a, li, ei, 0.0)
                elif u > 1 - 1e-9:
                    best = (dist, b, li, ei, 1.0)
                else:
                    best = (dist, Point2(origin.x, y_hit), li, ei, float(u))
    if best is None:
        raise DegenerateDomain(f"vertical ray from {origin} escaped the domain")
    return best[1], best[2], best[3], best[4]


# ---------------------------------------------------------------------------
# Planar subdivision and face walk.


class _Subdivision:
    def __init__(self):
        self.points: list[Point2] = []
        self.index: dict[Point2, int] = {}
        self.edges: dict[tuple[int, int], int | None] = {}  # key -> cut id or None

    def vid(self, p: Point2) -> int:
        i = self.index.get(p)
        if i is None:
            i = len(self.points)
            self.points.append(p)
            self.index[p] = i
        return i

    def add_edge(self, a: Point2, b: Point2, cut: int | None):
        ia, ib = self.vid(a), self.vid(b)
        if ia == ib:
            raise DegenerateDomain(f"zero-length subdivision edge at {a}")
        self.edges[(min(ia, ib), max(ia, ib))] = cut

    def face_cycles(self):
        """All interior-left face cycles: lists of (vertex id, cut id of the
        edge leaving it)."""
        out: dict[int, list[tuple[float, int]]] = {}
        for (ia, ib) in self.edges:
            pa, pb = self.points[ia], self.points[ib]
            ang_ab = math.atan2(pb.y - pa.y, pb.x - pa.x)
            ang_ba = math.atan2(pa.y - pb.y, pa.x - pb.x)
            out.setdefault(ia, []).append((ang_ab, ib))
            out.setdefault(ib, []).append((ang_ba, ia))
        for v in out:
            out[v].sort()
        next_half: dict[tuple[int, int], tuple[int, int]] = {}
        for (ia, ib) in self.edges:
            for u, v in ((ia, ib), (ib, ia)):
                pv, pu = self.points[v], self.points[u]
                ang_rev = math.atan2(pu.y - pv.y, pu.x - pv.x)
                ring = out[v]
                k = ring.index((ang_rev, u))
                ang_next, w = ring[(k - 1) % len(ring)]
                next_half[(u, v)] = (v, w)
        seen: set[tuple[int, int]] = set()
        cycles = []
        for start in sorted(next_half):
            if start in seen:
                continue
            cyc = []
            h = start
            while h not in seen:
                seen.add(h)
                cyc.append(h)
                h = next_half[h]
            if h == start:
                cycles.append(cyc)
        return cycles


def _face_polygon(points: Sequence[Point2], cycle) -> SimplePolygon:
    return SimplePolygon([points[u] for u, _ in cycle])


def _representative_point(poly: SimplePolygon) -> Point2:
    from .geometry import triangulate

    i, j, k = triangulate(poly)[0]
    vs = poly.vertices
    return Point2((vs[i].x + vs[j].x + vs[k].x) / 3.0,
                  (vs[i].y + vs[j].y + vs[k].y) / 3.0)


def _is_diagonal(poly: SimplePolygon, i: int, j: int) -> bool:
    verts = poly.vertices
    m = len(verts)
    if j in ((i + 1) % m, (i - 1) % m) or i == j:
        return False
    a, b = verts[i], verts[j]
    for k in range(m):
        e1 = verts[k]
        e2 = verts[(k + 1) % m]
        if k in (i, j) or (k + 1) % m in (i, j):
            # incident edge: only endpoint contact allowed
            for far in (e1, e2):
                if far not in (a, b) and on_segment(far, a, b):
                    return False
            continue
        if segments_properly_cross(a, b, e1, e2):
            return False
        if on_segment(e1, a, b) or on_segment(e2, a, b) \
                or on_segment(a, e1, e2) or on_segment(b, e1, e2):
            return False
    mid = Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
    return poly.contains(mid) == 1


def _refine_face(poly: SimplePolygon, labels: list[int | None], next_cut_id: int):
    """Split faces until each is bounded by at most three distinct cuts.
    Returns (list of (polygon, labels), new chords as (id, SplitSegment))."""
    chords: list[tuple[int, SplitSegment]] = []
    done: list[tuple[SimplePolygon, list[int | None]]] = []
    work = [(poly, labels)]
    while work:
        face, labs = work.pop(0)
        cuts = {c for c in labs if c is not None}
        if len(cuts) <= 3:
            done.append((face, labs))
            continue
        m = len(face.vertices)
        best = None
        for i in range(m):
            for j in range(i + 2, m):
                if not _is_diagonal(face, i, j):
                    continue
                arc1 = {c for c in labs[i:j] if c is not None}
                arc2 = {c for c in (labs[j:] + labs[:i]) if c is not None}
                score = max(len(arc1), len(arc2))
                if best is None or score < best[0]:
                    best = (score, i, j)
        if best is None or best[0] >= len(cuts):
            done.append((face, labs))  # no diagonal helps; accept as-is
            continue
        _, i, j = best
        cid = next_cut_id
        next_cut_id += 1
        verts = face.vertices
        chords.append((cid, SplitSegment(verts[i], verts[j])))
        poly1 = SimplePolygon(verts[i:j + 1])
        labs1 = labs[i:j] + [cid]
        poly2 = SimplePolygon(verts[j:] + verts[:i + 1])
        labs2 = labs[j:] + labs[:i] + [cid]
        work.append((poly1, labs1))
        work.append((poly2, labs2))
    return done, chords, next_cut_id


def decompose_domain(domain: PolygonalDomain,
                     points: Sequence[WeightedPoint] = ()) -> DomainDecomposition:
    """Partition the free space into simple faces with vertical splitting
    segments shot from hole extremes; dual vertices are weighted by the number
    of given points that fall in each face."""
    if domain.h == 0:
        faces = [domain.outer]
        weights = [len(points)]
        return DomainDecomposition(
            faces, [], [], [frozenset()], {0: set()}, weights,
            {wp.id: 0 for wp in points})

    loops = [domain.outer] + list(domain.holes)
    hits_on_edge: dict[tuple[int, int], list[Point2]] = {}
    cut_segments: list[SplitSegment] = []
    for hole in domain.holes:
        for origin, direction in _extreme_shot_origins(hole):
            hit, li, ei, u = _vertical_ray_hit(domain, origin, direction)
            if 0.0 < u < 1.0:
                hits_on_edge.setdefault((li, ei), []).append(hit)
            lo = origin if direction > 0 else hit
            hi = hit if direction > 0 else origin
            cut_segments.append(SplitSegment(lo, hi))

    sub = _Subdivision()
    for li, loop in enumerate(loops):
        verts = loop.vertices
        m = len(verts)
        for ei in range(m):
            a, b = verts[ei], verts[(ei + 1) % m]
            stops = hits_on_edge.get((li, ei), [])
            stops = sorted(set(stops), key=lambda p: _param_along(p, a, b))
            chain = [a] + stops + [b]
            for u, v in zip(chain, chain[1:]):
                if u != v:
                    sub.add_edge(u, v, None)
    for cid, seg in enumerate(cut_segments):
        sub.add_edge(seg.a, seg.b, cid)

    cycles = sub.face_cycles()
    raw_faces: list[tuple[SimplePolygon, list[int | None]]] = []
    for cyc in cycles:
        verts = [sub.points[u] for u, _ in cyc]
        if polygon_signed_area(np.asarray(verts, dtype=float)) <= 0:
            continue
        poly = SimplePolygon(verts)
        rep = _representative_point(poly)
        if domain.contains(rep) != 1:
            continue
        labels = [sub.edges[(min(u, v), max(u, v))]
                  for (u, _), (v, _) in zip(cyc, cyc[1:] + cyc[:1])]
        raw_faces.append((poly, labels))

    cut_is_shot = [True] * len(cut_segments)
    next_cut = len(cut_segments)
    final_faces: list[tuple[SimplePolygon, list[int | None]]] = []
    for poly, labels in raw_faces:
        done, chords, next_cut = _refine_face(poly, labels, next_cut)
        final_faces.extend(done)
        for cid, seg in chords:
            assert cid == len(cut_segments)
            cut_segments.append(seg)
            cut_is_shot.append(False)

    faces = [f for f, _ in final_faces]
    face_cuts = [frozenset(c for c in labs if c is not None)
                 for _, labs in final_faces]

    # Dual adjacency from shared undirected edges.
    edge_faces: dict[tuple[Point2, Point2], list[int]] = {}
    for fi, face in enumerate(faces):
        for a, b in face.edges():
            edge_faces.setdefault((min(a, b), max(a, b)), []).append(fi)
    adjacency: dict[int, set[int]] = {fi: set() for fi in range(len(faces))}
    for owners in edge_faces.values():
        if len(owners) == 2:
            fa, fb = owners
            if fa != fb:
                adjacency[fa].add(fb)
                adjacency[fb].add(fa)

    weights = [0] * len(faces)
    point_face: dict[int, int] = {}
    for wp in points:
        for fi, face in enumerate(faces):
            if face.contains(wp.pos) >= 0:
                point_face[wp.id] = fi
                weights[fi] += 1
                break
        else:
            raise DegenerateDomain(f"point {wp.id} lies in no decomposition face")

    return DomainDecomposition(faces, cut_segments, cut_is_shot, face_cuts,
                               adjacency, weights, point_face)


def _param_along(p: Point2, a: Point2, b: Point2) -> float:
    if abs(b.x - a.x) >= abs(b.y - a.y):
        return (p.x - a.x) / (b.x - a.x) if b.x != a.x else 0.0
    return (p.y - a.y) / (b.y - a.y)


# ---------------------------------------------------------------------------
# Weighted planar separator.


def _components(vertices: Iterable[int], adjacency, removed: frozenset[int]):
    left = set(vertices) - removed
    comps = []
    while left:
        start = min(left)
        stack = [start]
        comp = {start}
        left.discard(start)
        while stack:
            u = stack.pop()
            for v in adjacency[u]:
                if v in left:
                    left.discard(v)
                    comp.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _bipartition(comps, weights, cap):
    """Best assignment of components to two sides of weight <= cap each,
    minimising the heavier side; None if impossible."""
    cw = [sum(weights[v] for v in comp) for comp in comps]
    total = sum(cw)
    if any(w > cap for w in cw):
        return None
    if len(comps) <= 16:
        best = None
        for mask in range(1 << len(comps)):
            wp = sum(cw[i] for i in range(len(comps)) if mask >> i & 1)
            wq = total - wp
            if wp <= cap and wq <= cap and (best is None or max(wp, wq) < best[0]):
                best = (max(wp, wq), mask)
        if best is None:
            return None
        mask = best[1]
        p = [v for i in range(len(comps)) if mask >> i & 1 for v in comps[i]]
        q = [v for i in range(len(comps)) if not mask >> i & 1 for v in comps[i]]
        return frozenset(p), frozenset(q)
    order = sorted(range(len(comps)), key=lambda i: -cw[i])
    p: list[int] = []
    q: list[int] = []
    wp = wq = 0
    for i in order:
        if wp <= wq:
            p.extend(comps[i])
            wp += cw[i]
        else:
            q.extend(comps[i])
            wq += cw[i]
    if wp <= cap and wq <= cap:
        return frozenset(p), frozenset(q)
    return None


def planar_separator(adjacency: Mapping[int, Iterable[int]],
                     weights: Mapping[int, int] | Sequence[int]) -> SeparatorPartition:
    """Partition the vertex set into (P, Q, R) with no P-Q edge, |R| <= 4*sqrt(|V|),
    and both sides at most two thirds of the total weight."""
    vertices = sorted(adjacency)
    adj = {u: sorted(set(adjacency[u]) - {u}) for u in vertices}
    w = {u: int(weights[u]) for u in vertices}
    g = nx.Graph()
    g.add_nodes_from(vertices)
    for u in vertices:
        for v in adj[u]:
            g.add_edge(u, v)
    planar, _ = nx.check_planarity(g)
    if not planar:
        raise NotPlanar("separator input graph is not planar")
    n = len(vertices)
    total = sum(w.values())
    cap = 2.0 * total / 3.0
    r_cap = int(4.0 * math.sqrt(n))
    if n == 1:
        return SeparatorPartition(frozenset(), frozenset(), frozenset(vertices))

    def finish(removed: frozenset[int]):
        comps = _components(vertices, adj, removed)
        split = _bipartition(comps, w, cap)
        if split is None:
            return None
        return SeparatorPartition(split[0], split[1], removed)

    if n <= 12:
        # Minimum-size separator, most balanced among those of that size.
        for size in range(0, min(n, r_cap) + 1):
            best = None
            for combo in itertools.combinations(vertices, size):
                result = finish(frozenset(combo))
                if result is None:
                    continue
                wp = sum(w[v] for v in result.p)
                wq = sum(w[v] for v in result.q)
                score = (max(wp, wq), tuple(sorted(result.r)))
                if best is None or score < best[0]:
                    best = (score, result)
            if best is not None:
                return best[1]
        raise NotPlanar("no separator found on a small planar graph")

    candidates: list[frozenset[int]] = [frozenset()]
    candidates.extend(frozenset([v]) for v in vertices)
    roots = vertices[:: max(1, n // 4)]
    for root in roots:
        layers: dict[int, int] = {root: 0}
        frontier = [root]
        depth = 0
        by_level: list[list[int]] = [[root]]
        tree_parent = {root: None}
        while frontier:
            depth += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in layers:
                        layers[v] = depth
                        tree_parent[v] = u
                        nxt.append(v)
            if nxt:
                by_level.append(sorted(nxt))
            frontier = nxt
        for level in by_level:
            candidates.append(frozenset(level))
        # Fundamental cycles of the BFS tree close off one region each.
        for u in vertices:
            for v in adj[u]:
                if u < v and tree_parent.get(v) != u and tree_parent.get(u) != v:
                    cyc = set()
                    for start in (u, v):
                        node = start
                        while node is not None:
                            cyc.add(node)
                            node = tree_parent.get(node)
                    candidates.append(frozenset(cyc))
    best = None
    for idx, removed in enumerate(candidates):
        if len(removed) > r_cap:
            continue
        result = finish(removed)
        if result is None:
            continue
        wp = sum(w[v] for v in result.p)
        wq = sum(w[v] for v in result.q)
        score = (max(wp, wq), len(removed), idx)
        if best is None or score < best[0]:
            best = (score, result)
    if best is None:
        raise NotPlanar("no separator candidate met the contract")
    return best[1]
