"""Geodesic shortest paths, the weighted point metric, and geodesic projection
of points onto splitting segments.

The geodesic oracle is a visibility graph plus Dijkstra, shared by simple
polygons, polygonal domains, and face-set sub-regions of a decomposition.
Shortest paths bend only at boundary vertices, so the graph over boundary
vertices and query points is exact.  Visibility tests run vectorised in floats
with an error-bound filter; contact-degenerate pairs fall back to an exact
scalar path that subdivides the segment at every boundary touch.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .errors import DegenerateDomain, PointOutsideFreeSpace
from .geometry import (
    Point2,
    SimplePolygon,
    SplitSegment,
    WeightedPoint,
    on_segment,
    orientation,
    segments_properly_cross,
)

_EPS = 3.3306690738754716e-16


class GeodesicPath(NamedTuple):
    anchors: tuple[Point2, ...]
    length: float


class ProjectedPoint(NamedTuple):
    source_id: int
    position: Point2
    param: float
    augmented_weight: float


class PolygonalDomain:
    """Outer simple polygon with h disjoint simple holes; free space is the
    closure of the outer polygon minus the open hole interiors."""

    def __init__(self, outer: SimplePolygon, holes: Sequence[SimplePolygon] = ()):
        outer.validate()
        self.outer = outer
        normalized = []
        for hole in holes:
            ccw = hole if hole.signed_area() > 0 else hole.reversed()
            ccw.validate()
            normalized.append(ccw.reversed())  # stored clockwise
        self.holes: tuple[SimplePolygon, ...] = tuple(normalized)
        self._region: _Region | None = None
        self._validate()

    @property
    def h(self) -> int:
        return len(self.holes)

    def _validate(self) -> None:
        for hi, hole in enumerate(self.holes):
            for v in hole.vertices:
                if self.outer.contains(v) != 1:
                    raise DegenerateDomain(
                        f"hole {hi} touches or leaves the outer boundary")
            for a, b in hole.edges():
                for c, d in self.outer.edges():
                    if segments_properly_cross(a, b, c, d):
                        raise DegenerateDomain(f"hole {hi} crosses the outer boundary")
        for i in range(len(self.holes)):
            for j in range(i + 1, len(self.holes)):
                if _polygons_interfere(self.holes[i], self.holes[j]):
                    raise DegenerateDomain(f"holes {i} and {j} are not disjoint")

    def contains(self, p) -> int:
        """1 strictly in free space, 0 on a boundary, -1 outside."""
        c_out = self.outer.contains(p)
        if c_out <= 0:
            return c_out
        for hole in self.holes:
            c = hole.contains(p)
            if c == 0:
                return 0
            if c == 1:
                return -1
        return 1

    def region(self) -> "_Region":
        if self._region is None:
            self._region = DomainRegion(self)
        return self._region


def _polygons_interfere(a: SimplePolygon, b: SimplePolygon) -> bool:
    for e1, e2 in a.edges():
        for f1, f2 in b.edges():
            if segments_properly_cross(e1, e2, f1, f2):
                return True
            if on_segment(e1, f1, f2) or on_segment(f1, e1, e2):
                return True
    if b.contains(a.vertices[0]) >= 0 or a.contains(b.vertices[0]) >= 0:
        return True
    return False


# ---------------------------------------------------------------------------
# Regions: a uniform view of "the space geodesics live in".


def _loop_reflex_flags(vertices: Sequence[Point2]) -> list[bool]:
    # Outer loops are ccw and holes cw; with that convention a vertex casts
    # shadows into the free space iff orientation(prev, v, next) < 0.
    m = len(vertices)
    return [orientation(vertices[i - 1], vertices[i], vertices[(i + 1) % m]) < 0
            for i in range(m)]


class _Region:
    """Shared geometry caches for one region (polygon, domain, or face set)."""

    def __init__(self, loops: Sequence[Sequence[Point2]], convex: bool,
                 blocking_edges=None, vertices=None, reflex=None):
        if vertices is None:
            vertices = []
            reflex = []
            for loop in loops:
                flags = _loop_reflex_flags(loop)
                for v, r in zip(loop, flags):
                    vertices.append(v)
                    reflex.append(r)
        if blocking_edges is None:
            blocking_edges = []
            for loop in loops:
                m = len(loop)
                blocking_edges.extend((loop[i], loop[(i + 1) % m]) for i in range(m))
        self.vertices: list[Point2] = list(vertices)
        self.reflex = np.asarray(reflex, dtype=bool)
        self.blocking_edges: list[tuple[Point2, Point2]] = list(blocking_edges)
        self.vcoords = (np.asarray(self.vertices, dtype=float)
                        if self.vertices else np.zeros((0, 2)))
        self.ecoords = (np.asarray(
            [(a.x, a.y, b.x, b.y) for a, b in self.blocking_edges], dtype=float)
            if self.blocking_edges else np.zeros((0, 4)))
        self.is_convex = convex
        scale = float(np.abs(self.vcoords).max()) if len(self.vcoords) else 1.0
        # Points this close to a wall count as on it: absorbs the 1-ulp drift of
        # midpoints interpolated along boundary-collinear segments.
        self.boundary_tol = 1e-9 * max(1.0, scale)
        self._vis_vv: np.ndarray | None = None

    def near_boundary(self, p) -> bool:
        tol2 = self.boundary_tol * self.boundary_tol
        px, py = float(p[0]), float(p[1])
        for a, b in self.blocking_edges:
            ex = b.x - a.x
            ey = b.y - a.y
            d2 = ex * ex + ey * ey
            t = ((px - a.x) * ex + (py - a.y) * ey) / d2 if d2 else 0.0
            t = min(max(t, 0.0), 1.0)
            dx = px - (a.x + t * ex)
            dy = py - (a.y + t * ey)
            if dx * dx + dy * dy <= tol2:
                return True
        return False

    def contains_closed(self, p) -> bool:
        """Membership in the closed region with boundary tolerance."""
        return self.contains(p) >= 0 or self.near_boundary(p)

    def contains(self, p) -> int:
        raise NotImplementedError

    def vertex_visibility(self) -> np.ndarray:
        if self._vis_vv is None:
            m = len(self.vertices)
            vis = np.eye(m, dtype=bool)
            if m:
                iu, ju = np.triu_indices(m, k=1)
                flags = _vis_pairs(self, self.vcoords[iu], self.vcoords[ju])
                vis[iu, ju] = flags
                vis[ju, iu] = flags
            self._vis_vv = vis
        return self._vis_vv


class PolygonRegion(_Region):
    def __init__(self, polygon: SimplePolygon):
        super().__init__([polygon.vertices], polygon.is_convex())
        self.polygon = polygon

    def contains(self, p) -> int:
        return self.polygon.contains(p)


class DomainRegion(_Region):
    def __init__(self, domain: PolygonalDomain):
        loops = [domain.outer.vertices] + [h.vertices for h in domain.holes]
        convex = domain.h == 0 and domain.outer.is_convex()
        super().__init__(loops, convex)
        self.domain = domain

    def contains(self, p) -> int:
        return self.domain.contains(p)


class FaceSetRegion(_Region):
    """Union of faces of a shared subdivision; edges bounding two member faces
    are interior and do not block sight lines."""

    def __init__(self, faces: Sequence[SimplePolygon]):
        self.faces = list(faces)
        use: dict[tuple, list[tuple[Point2, Point2]]] = {}
        for face in self.faces:
            for a, b in face.edges():
                key = (min(a, b), max(a, b))
                use.setdefault(key, []).append((a, b))
        blocking = [pair[0] for pair in use.values() if len(pair) == 1]
        verts: list[Point2] = []
        seen = set()
        for face in self.faces:
            for v in face.vertices:
                if v not in seen:
                    seen.add(v)
                    verts.append(v)
        # Union boundary reflexivity is awkward to derive per vertex; a superset
        # of anchor candidates is harmless for correctness.
        super().__init__([], convex=False, blocking_edges=blocking,
                         vertices=verts, reflex=[True] * len(verts))

    def contains(self, p) -> int:
        best = -1
        for face in self.faces:
            c = face.contains(p)
            if c > best:
                best = c
                if best == 1:
                    break
        return best


def region_of(obj) -> _Region:
    if isinstance(obj, _Region):
        return obj
    if isinstance(obj, PolygonalDomain):
        return obj.region()
    if isinstance(obj, SimplePolygon):
        return PolygonRegion(obj)
    raise TypeError(f"cannot build a region from {type(obj)!r}")


# ---------------------------------------------------------------------------
# Exact scalar segment-in-region test (used directly and as vector fallback).


def _segment_param(p, a, b) -> float:
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    if abs(dx) >= abs(dy):
        return (p[0] - a[0]) / dx if dx else 0.0
    return (p[1] - a[1]) / dy if dy else 0.0


def segment_in_region(region: _Region, p: Point2, q: Point2) -> bool:
    """Exact containment of segment pq in the closed region.  Subdivides at
    every boundary contact and tests the midpoint of each piece."""
    if region.contains(p) < 0 or region.contains(q) < 0:
        return False
    if p == q:
        return True
    params = [0.0, 1.0]
    for a, b in region.blocking_edges:
        if segments_properly_cross(p, q, a, b):
            return False
        for touch in (a, b):
            if on_segment(touch, p, q):
                params.append(_segment_param(touch, p, q))
        if on_segment(p, a, b):
            params.append(0.0)
        if on_segment(q, a, b):
            params.append(1.0)
    params = sorted(set(params))
    for lo, hi in zip(params, params[1:]):
        if hi - lo < 1e-15:
            continue
        t = 0.5 * (lo + hi)
        mid = Point2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
        if not region.contains_closed(mid):
            return False
    return True


# ---------------------------------------------------------------------------
# Vectorised visibility and membership.


def _signs_with_bound(det, bound):
    s = np.zeros(det.shape, dtype=np.int8)
    s[det > bound] = 1
    s[det < -bound] = -1
    unsure = (np.abs(det) <= bound) & (bound > 0)
    return s, unsure


def _cross_terms(px, py, qx, qy, rx, ry):
    """cross(q - p, r - p) with the term pair needed for the error bound."""
    t1 = (qx - px) * (ry - py)
    t2 = (qy - py) * (rx - px)
    return t1 - t2, _EPS * (np.abs(t1) + np.abs(t2))


def _vis_pairs(region: _Region, A: np.ndarray, B: np.ndarray,
               chunk: int = 65536) -> np.ndarray:
    """Visibility of segments A[i]-B[i] inside the region.  Both endpoint
    arrays must already lie in the closed region."""
    n = len(A)
    out = np.zeros(n, dtype=bool)
    if n == 0:
        return out
    if region.is_convex:
        out[:] = True
        return out
    E = region.ecoords
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        out[sl] = _vis_pairs_chunk(region, A[sl], B[sl], E)
    return out


def _vis_pairs_chunk(region, A, B, E) -> np.ndarray:
    n = len(A)
    blocked = np.zeros(n, dtype=bool)
    needs_scalar = np.zeros(n, dtype=bool)
    ax, ay = A[:, 0], A[:, 1]
    bx, by = B[:, 0], B[:, 1]
    qlen2 = np.maximum((bx - ax) ** 2 + (by - ay) ** 2, 1e-300)
    for es in range(0, len(E), 64):
        Ech = E[es:es + 64]
        e1x, e1y, e2x, e2y = (Ech[:, 0][None, :], Ech[:, 1][None, :],
                              Ech[:, 2][None, :], Ech[:, 3][None, :])
        d1, b1 = _cross_terms(ax[:, None], ay[:, None], bx[:, None], by[:, None], e1x, e1y)
        d2, b2 = _cross_terms(ax[:, None], ay[:, None], bx[:, None], by[:, None], e2x, e2y)
        d3, b3 = _cross_terms(e1x, e1y, e2x, e2y, ax[:, None], ay[:, None])
        d4, b4 = _cross_terms(e1x, e1y, e2x, e2y, bx[:, None], by[:, None])
        s1, u1 = _signs_with_bound(d1, b1)
        s2, u2 = _signs_with_bound(d2, b2)
        s3, u3 = _signs_with_bound(d3, b3)
        s4, u4 = _signs_with_bound(d4, b4)
        certain = ~(u1 | u2 | u3 | u4)
        proper = certain & (s1 * s2 == -1) & (s3 * s4 == -1)
        blocked |= proper.any(axis=1)
        # Exact subdivision is only needed when an edge endpoint lies strictly
        # inside the query segment (or a collinear edge spans across it);
        # contacts at the query's own endpoints cannot hide a crossing.
        z1 = (s1 == 0) | u1
        z2 = (s2 == 0) | u2
        t1 = ((e1x - ax[:, None]) * (bx - ax)[:, None]
              + (e1y - ay[:, None]) * (by - ay)[:, None]) / qlen2[:, None]
        t2 = ((e2x - ax[:, None]) * (bx - ax)[:, None]
              + (e2y - ay[:, None]) * (by - ay)[:, None]) / qlen2[:, None]
        inner1 = (t1 > 1e-12) & (t1 < 1 - 1e-12)
        inner2 = (t2 > 1e-12) & (t2 < 1 - 1e-12)
        spans = z1 & z2 & (((t1 <= 0) & (t2 >= 1)) | ((t2 <= 0) & (t1 >= 1)))
        contact = (z1 & inner1) | (z2 & inner2) | spans
        needs_scalar |= contact.any(axis=1)
    vis = np.zeros(n, dtype=bool)
    plain = ~blocked & ~needs_scalar
    if plain.any():
        mid = 0.5 * (A[plain] + B[plain])
        code, _ = _contains_batch(region, mid)
        idx = np.nonzero(plain)[0]
        vis[idx] = code >= 0
        for i in np.nonzero(code < 0)[0]:
            gi = idx[i]
            if region.near_boundary(mid[i]):
                vis[gi] = segment_in_region(region, Point2(*A[gi]), Point2(*B[gi]))
    for gi in np.nonzero(needs_scalar & ~blocked)[0]:
        vis[gi] = segment_in_region(region, Point2(*A[gi]), Point2(*B[gi]))
    return vis


def _pip_batch(pts: np.ndarray, loop: np.ndarray):
    """Vectorised crossing-number test: (inside parity, unsure flag)."""
    n = len(pts)
    px, py = pts[:, 0], pts[:, 1]
    inside = np.zeros(n, dtype=bool)
    unsure = np.zeros(n, dtype=bool)
    m = len(loop)
    a = loop
    b = np.roll(loop, -1, axis=0)
    for i in range(m):
        ax, ay = a[i]
        bx, by = b[i]
        cond = (ay > py) != (by > py)
        side, bound = _cross_terms(ax, ay, bx, by, px, py)
        zeroish = np.abs(side) <= bound
        on_band = zeroish & (px >= min(ax, bx) - 1e-12) & (px <= max(ax, bx) + 1e-12) \
            & (py >= min(ay, by) - 1e-12) & (py <= max(ay, by) + 1e-12)
        unsure |= on_band
        unsure |= cond & zeroish
        if by > ay:
            inside ^= cond & (side > bound)
        else:
            inside ^= cond & (side < -bound)
    return inside, unsure


def _contains_batch(region: _Region, pts: np.ndarray):
    """Region membership codes for many points: (code array 1/0/-1, unsure)."""
    n = len(pts)
    if isinstance(region, PolygonRegion):
        inside, unsure = _pip_batch(pts, region.polygon.coords)
        code = np.where(inside, 1, -1).astype(np.int8)
    elif isinstance(region, DomainRegion):
        inside, unsure = _pip_batch(pts, region.domain.outer.coords)
        code = np.where(inside, 1, -1).astype(np.int8)
        for hole in region.domain.holes:
            h_in, h_un = _pip_batch(pts, hole.coords)
            unsure |= h_un
            code[h_in & (code == 1)] = -1
    else:
        code = np.full(n, -1, dtype=np.int8)
        unsure = np.zeros(n, dtype=bool)
        for face in region.faces:
            f_in, f_un = _pip_batch(pts, face.coords)
            unsure |= f_un
            code = np.maximum(code, np.where(f_in, 1, -1).astype(np.int8))
    for i in np.nonzero(unsure)[0]:
        code[i] = region.contains(Point2(*pts[i]))
    unsure[:] = False
    return code, unsure


# ---------------------------------------------------------------------------
# Visible sub-intervals of a segment from one viewpoint.


def _sight_batch(region: _Region, o: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Sight tests from one origin to many in-region targets.  Intended for
    generic targets (between alignment events): blocked iff some blocking edge
    is properly crossed or a blocking-edge endpoint sits on the open segment."""
    k = len(targets)
    if k == 0:
        return np.zeros(0, dtype=bool)
    if region.is_convex:
        return np.ones(k, dtype=bool)
    E = region.ecoords
    ox, oy = float(o[0]), float(o[1])
    tx, ty = targets[:, 0], targets[:, 1]
    e1x, e1y, e2x, e2y = E[:, 0][None, :], E[:, 1][None, :], E[:, 2][None, :], E[:, 3][None, :]
    d1, b1 = _cross_terms(ox, oy, tx[:, None], ty[:, None], e1x, e1y)
    d2, b2 = _cross_terms(ox, oy, tx[:, None], ty[:, None], e2x, e2y)
    d3, b3 = _cross_terms(e1x, e1y, e2x, e2y, ox, oy)
    d4, b4 = _cross_terms(e1x, e1y, e2x, e2y, tx[:, None], ty[:, None])
    proper = ((d1 > b1) & (d2 < -b2) | (d1 < -b1) & (d2 > b2)) \
        & ((d3 > b3) & (d4 < -b4) | (d3 < -b3) & (d4 > b4))
    blocked = proper.any(axis=1)
    # Conservative: a blocking-edge endpoint on the open sight segment blocks it.
    for ends in (E[:, 0:2], E[:, 2:4]):
        ux = ends[:, 0][None, :]
        uy = ends[:, 1][None, :]
        c, cb = _cross_terms(ox, oy, tx[:, None], ty[:, None], ux, uy)
        seg_d2 = (tx - ox) ** 2 + (ty - oy) ** 2
        dot = (ux - ox) * (tx[:, None] - ox) + (uy - oy) * (ty[:, None] - oy)
        frac = dot / np.maximum(seg_d2[:, None], 1e-300)
        on_open = (np.abs(c) <= cb + 1e-12 * np.sqrt(np.maximum(seg_d2[:, None], 0))) \
            & (frac > 1e-9) & (frac < 1.0 - 1e-9)
        blocked |= on_open.any(axis=1)
    return ~blocked


def _visible_intervals(region: _Region, origin: np.ndarray, seg: SplitSegment,
                       seg_edge_events: np.ndarray) -> list[tuple[float, float]]:
    """Maximal visible t-intervals of seg from origin."""
    A = np.array([seg.a.x, seg.a.y])
    d = np.array([seg.b.x - seg.a.x, seg.b.y - seg.a.y])
    events = [0.0, 1.0]
    events.extend(seg_edge_events.tolist())
    refl = region.vcoords[region.reflex] if len(region.vcoords) else np.zeros((0, 2))
    if len(refl):
        ux = refl[:, 0] - origin[0]
        uy = refl[:, 1] - origin[1]
        c0 = ux * (A[1] - origin[1]) - uy * (A[0] - origin[0])
        c1 = ux * d[1] - uy * d[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            ts = -c0 / c1
        good = np.isfinite(ts) & (ts > 1e-12) & (ts < 1.0 - 1e-12)
        events.extend(ts[good].tolist())
    events = sorted(set(events))
    mids = []
    spans = []
    for lo, hi in zip(events, events[1:]):
        if hi - lo < 1e-13:
            continue
        mids.append(lo + 0.5 * (hi - lo))
        spans.append((lo, hi))
    if not mids:
        return []
    targets = A[None, :] + np.asarray(mids)[:, None] * d[None, :]
    vis = _sight_batch(region, origin, targets)
    intervals: list[tuple[float, float]] = []
    for (lo, hi), ok in zip(spans, vis):
        if not ok:
            continue
        if intervals and abs(intervals[-1][1] - lo) < 1e-12:
            intervals[-1] = (intervals[-1][0], hi)
        else:
            intervals.append((lo, hi))
    return intervals


def _segment_edge_events(region: _Region, seg: SplitSegment) -> np.ndarray:
    """Params where seg meets blocking edges (transversal or overlap ends)."""
    out = []
    p, q = seg.a, seg.b
    for a, b in region.blocking_edges:
        if segments_properly_cross(p, q, a, b):
            denom = (q.x - p.x) * (b.y - a.y) - (q.y - p.y) * (b.x - a.x)
            t = ((a.x - p.x) * (b.y - a.y) - (a.y - p.y) * (b.x - a.x)) / denom
            out.append(t)
            continue
        for touch in (a, b):
            if on_segment(touch, p, q):
                out.append(_segment_param(touch, p, q))
        for endpoint, t in ((p, 0.0), (q, 1.0)):
            if on_segment(endpoint, a, b):
                out.append(t)
    arr = np.asarray([t for t in out if 1e-12 < t < 1 - 1e-12], dtype=float)
    return arr


# ---------------------------------------------------------------------------
# The engine: one region, many points.


class GeodesicEngine:
    """Visibility graph over region vertices plus a fixed point set, with
    vertex-sourced Dijkstra distances and batched helpers."""

    def __init__(self, region: _Region, points_xy: np.ndarray):
        self.region = region
        self.pts = np.asarray(points_xy, dtype=float).reshape(-1, 2)
        self.m = len(region.vertices)
        self.n = len(self.pts)
        self.vis_vv = region.vertex_visibility()
        if self.n and self.m:
            vi, pi = np.meshgrid(np.arange(self.m), np.arange(self.n), indexing="ij")
            flags = _vis_pairs(region, region.vcoords[vi.ravel()], self.pts[pi.ravel()])
            self.vis_vp = flags.reshape(self.m, self.n)
        else:
            self.vis_vp = np.zeros((self.m, self.n), dtype=bool)
        self._D = None
        self._pp_cache: dict[tuple[int, int], float] = {}

    @property
    def D(self) -> np.ndarray:
        """Geodesic distances vertex -> every node (vertices then points)."""
        if self._D is None:
            m, n = self.m, self.n
            if self.region.is_convex:
                nodes = np.vstack([self.region.vcoords, self.pts]) if n else self.region.vcoords
                diff = self.region.vcoords[:, None, :] - nodes[None, :, :]
                self._D = np.sqrt((diff ** 2).sum(axis=2))
            else:
                rows, cols, data = [], [], []
                vv = np.triu(self.vis_vv, k=1)
                vi, vj = np.nonzero(vv)
                w = np.hypot(*(self.region.vcoords[vi] - self.region.vcoords[vj]).T)
                rows.extend(vi)
                cols.extend(vj)
                data.extend(w)
                pi, pj = np.nonzero(self.vis_vp)
                w2 = np.hypot(*(self.region.vcoords[pi] - self.pts[pj]).T)
                rows.extend(pi)
                cols.extend(pj + m)
                data.extend(w2)
                g = csr_matrix((data, (rows, cols)), shape=(m + n, m + n))
                self._D = _csgraph_dijkstra(g, directed=False, indices=np.arange(m))
        return self._D

    def point_point(self, i: int, j: int) -> float:
        """Geodesic distance between points i and j of the engine's point set."""
        if i == j:
            return 0.0
        key = (min(i, j), max(i, j))
        cached = self._pp_cache.get(key)
        if cached is not None:
            return cached
        val = self.point_point_many(np.asarray([[i, j]]))[0]
        self._pp_cache[key] = val
        return val

    def point_point_many(self, pairs: np.ndarray) -> np.ndarray:
        """Geodesic distances for an array of point-id pairs, vectorised via the
        first-anchor decomposition min_r |u r| + D[r, v]."""
        pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
        if len(pairs) == 0:
            return np.zeros(0)
        P = self.pts
        direct = _vis_pairs(self.region, P[pairs[:, 0]], P[pairs[:, 1]])
        out = np.full(len(pairs), np.inf)
        euclid = np.hypot(*(P[pairs[:, 0]] - P[pairs[:, 1]]).T)
        out[direct] = euclid[direct]
        rest = np.nonzero(~direct)[0]
        if len(rest):
            D = self.D
            order = rest[np.argsort(pairs[rest, 0], kind="stable")]
            for u in np.unique(pairs[order, 0]):
                sel = order[pairs[order, 0] == u]
                mask = self.vis_vp[:, u]
                if not mask.any():
                    continue
                base = np.hypot(*(self.region.vcoords[mask] - P[u]).T)
                tail = D[mask][:, self.m + pairs[sel, 1]]
                out[sel] = (base[:, None] + tail).min(axis=0)
        same = (pairs[:, 0] == pairs[:, 1])
        out[same] = 0.0
        return out

    def pairwise(self, ids: Sequence[int]) -> np.ndarray:
        ids = list(ids)
        k = len(ids)
        iu, ju = np.triu_indices(k, 1)
        pairs = np.stack([np.asarray(ids)[iu], np.asarray(ids)[ju]], axis=1)
        vals = self.point_point_many(pairs)
        M = np.zeros((k, k))
        M[iu, ju] = vals
        M[ju, iu] = vals
        return M

    # -- projections --------------------------------------------------------

    def project_segment(self, seg: SplitSegment, ids: Sequence[int],
                        weights: Sequence[float]) -> list[ProjectedPoint]:
        """Geodesic projection of the given points onto seg; ids index the
        engine's point set, and the returned source_id matches them."""
        ids = list(ids)
        n_s = len(ids)
        A = np.array([seg.a.x, seg.a.y])
        dvec = np.array([seg.b.x - seg.a.x, seg.b.y - seg.a.y])
        seg_d2 = float(dvec @ dvec)
        seg_events = _segment_edge_events(self.region, seg)

        cand_vert: list[int] = []
        cand_t: list[float] = []
        if not self.region.is_convex:
            for v_idx in np.nonzero(self.region.reflex)[0]:
                o = self.region.vcoords[v_idx]
                foot = float((o - A) @ dvec) / seg_d2 if seg_d2 else 0.0
                for lo, hi in _visible_intervals(self.region, o, seg, seg_events):
                    for t in (lo, hi, min(max(foot, lo), hi)):
                        cand_vert.append(int(v_idx))
                        cand_t.append(t)
        out: list[ProjectedPoint] = []
        if cand_vert:
            cv = np.asarray(cand_vert)
            ct = np.asarray(cand_t)
            cpos = A[None, :] + ct[:, None] * dvec[None, :]
            clen = np.hypot(*(self.region.vcoords[cv] - cpos).T)
            Dvp = self.D[:, self.m + np.asarray(ids, dtype=int)]
            vert_vals = clen[:, None] + Dvp[cv]  # (K, n_s)
        else:
            vert_vals = np.full((0, n_s), np.inf)
            ct = np.zeros(0)

        for col, (pid, w) in enumerate(zip(ids, weights)):
            p = self.pts[pid]
            best_val = np.inf
            best_t = 0.0
            if len(ct):
                vals = vert_vals[:, col]
                order = np.lexsort((ct, vals))
                best = order[0]
                best_val = float(vals[best])
                best_t = float(ct[best])
            foot = float((p - A) @ dvec) / seg_d2 if seg_d2 else 0.0
            for lo, hi in _visible_intervals(self.region, p, seg, seg_events):
                for t in (lo, hi, min(max(foot, lo), hi)):
                    pos = A + t * dvec
                    val = float(math.hypot(p[0] - pos[0], p[1] - pos[1]))
                    if val < best_val - 1e-15 or (abs(val - best_val) <= 1e-15 and t < best_t):
                        best_val = val
                        best_t = t
            if not math.isfinite(best_val):
                raise PointOutsideFreeSpace(
                    "no geodesic from point to segment inside the region")
            pos = Point2(A[0] + best_t * dvec[0], A[1] + best_t * dvec[1])
            out.append(ProjectedPoint(pid, pos, best_t, w + best_val))
        return out

def shortest_path(region: _Region, p: Point2, q: Point2) -> GeodesicPath:
    """Exact geodesic between two points of the closed region, with anchors."""
    if region.contains(p) < 0:
        raise PointOutsideFreeSpace(f"point {p} is outside the free space")
    if region.contains(q) < 0:
        raise PointOutsideFreeSpace(f"point {q} is outside the free space")
    if p == q:
        return GeodesicPath((p, p), 0.0)
    if segment_in_region(region, p, q):
        return GeodesicPath((p, q), math.hypot(q.x - p.x, q.y - p.y))
    m = len(region.vertices)
    vis_vv = region.vertex_visibility()
    vcoords = region.vcoords
    p_arr = np.asarray(p, dtype=float)
    q_arr = np.asarray(q, dtype=float)
    vis_pv = _vis_pairs(region, np.repeat(p_arr[None, :], m, axis=0), vcoords)
    vis_qv = _vis_pairs(region, np.repeat(q_arr[None, :], m, axis=0), vcoords)
    # Nodes: 0..m-1 vertices, m = p, m+1 = q.
    adj: list[list[tuple[int, float]]] = [[] for _ in range(m + 2)]
    vi, vj = np.nonzero(np.triu(vis_vv, k=1))
    for i, j in zip(vi, vj):
        w = math.hypot(*(vcoords[i] - vcoords[j]))
        adj[i].append((j, w))
        adj[j].append((i, w))
    for i in np.nonzero(vis_pv)[0]:
        w = math.hypot(*(vcoords[i] - p_arr))
        adj[m].append((int(i), w))
        adj[int(i)].append((m, w))
    for i in np.nonzero(vis_qv)[0]:
        w = math.hypot(*(vcoords[i] - q_arr))
        adj[m + 1].append((int(i), w))
        adj[int(i)].append((m + 1, w))
    dist = [math.inf] * (m + 2)
    pred = [-1] * (m + 2)
    dist[m] = 0.0
    heap = [(0.0, m)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in sorted(adj[u]):
            nd = d + w
            # Deterministic tie rule: on equal length prefer the smaller predecessor.
            if nd < dist[v] or (nd == dist[v] and pred[v] != -1 and u < pred[v]):
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    if not math.isfinite(dist[m + 1]):
        raise PointOutsideFreeSpace("region is not geodesically connected")
    chain = [m + 1]
    while chain[-1] != m:
        chain.append(pred[chain[-1]])
    chain.reverse()
    anchors = tuple(p if c == m else q if c == m + 1 else region.vertices[c]
                    for c in chain)
    return GeodesicPath(anchors, dist[m + 1])


# ---------------------------------------------------------------------------
# Public operations.


@dataclass
class VisibilityGraph:
    nodes: list[Point2]
    edges: dict[tuple[int, int], float]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


def build_visibility_graph(domain: PolygonalDomain,
                           extra: Sequence[Point2] = ()) -> VisibilityGraph:
    """Full visibility graph over domain vertices plus extra points; edge (u,v)
    present iff segment uv lies in the free space, weighted by |uv|."""
    region = region_of(domain)
    extra_pts = [Point2(float(p[0]), float(p[1])) for p in extra]
    for p in extra_pts:
        if region.contains(p) < 0:
            raise PointOutsideFreeSpace(f"extra point {p} is outside the free space")
    nodes = list(region.vertices) + extra_pts
    coords = np.asarray(nodes, dtype=float) if nodes else np.zeros((0, 2))
    k = len(nodes)
    iu, ju = np.triu_indices(k, 1)
    flags = _vis_pairs(region, coords[iu], coords[ju])
    edges: dict[tuple[int, int], float] = {}
    for i, j, ok in zip(iu, ju, flags):
        if ok:
            edges[(int(i), int(j))] = float(math.hypot(*(coords[i] - coords[j])))
    return VisibilityGraph(nodes, edges)


def geodesic_distance(domain, p, q) -> GeodesicPath:
    """Shortest obstacle-avoiding path between p and q in the free space."""
    region = region_of(domain)
    return shortest_path(region, Point2(float(p[0]), float(p[1])),
                         Point2(float(q[0]), float(q[1])))


def weighted_distance(p: WeightedPoint, q: WeightedPoint, domain) -> float:
    """w(p) + geodesic(p,q) + w(q), and 0 for the same point id."""
    if p.id == q.id:
        return 0.0
    return p.weight + geodesic_distance(domain, p.pos, q.pos).length + q.weight


def geodesic_project(domain, p: WeightedPoint, seg: SplitSegment) -> ProjectedPoint:
    """Point of seg at minimum geodesic distance from p (smallest param on ties),
    carrying the augmented weight w(p) + d(p, projection)."""
    region = region_of(domain)
    if region.contains(p.pos) < 0:
        raise PointOutsideFreeSpace(f"point {p.pos} is outside the free space")
    if not segment_in_region(region, seg.a, seg.b):
        raise PointOutsideFreeSpace("segment does not lie in the free space")
    engine = GeodesicEngine(region, np.asarray([p.pos], dtype=float))
    return engine.project_segment(seg, [0], [p.weight])[0]
