"""Planar primitives: adaptive-exact orientation, simple polygons, ear-clipping
triangulation, and balanced polygon cuts.

Coordinates are expected to stay within |x|, |y| <= 1e6 (the magnitude budget
enforced at instance load time).  The orientation predicate evaluates a float
determinant with a Shewchuk-style error bound and falls back to exact rational
arithmetic near zero, so it is exact for every representable input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BalanceNotAchieved, DegenerateInput, NonSimplePolygon

# (3 + 16u)u for IEEE double: safe filter bound for the 2x2 determinant.
_ORIENT_EPS = 3.3306690738754716e-16


class Point2(NamedTuple):
    x: float
    y: float


class WeightedPoint(NamedTuple):
    id: int
    pos: Point2
    weight: float


class SplitSegment(NamedTuple):
    a: Point2
    b: Point2

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)

    def lerp(self, t: float) -> Point2:
        return Point2(self.a.x + t * (self.b.x - self.a.x),
                      self.a.y + t * (self.b.y - self.a.y))


def _orientation_exact(ax, ay, bx, by, cx, cy) -> int:
    det = (Fraction(bx) - Fraction(ax)) * (Fraction(cy) - Fraction(ay)) \
        - (Fraction(by) - Fraction(ay)) * (Fraction(cx) - Fraction(ax))
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def orientation(a, b, c) -> int:
    """Sign of twice the signed area of triangle abc: +1 ccw, -1 cw, 0 collinear."""
    detl = (b[0] - a[0]) * (c[1] - a[1])
    detr = (b[1] - a[1]) * (c[0] - a[0])
    det = detl - detr
    bound = _ORIENT_EPS * (abs(detl) + abs(detr))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    if det == 0.0 and bound == 0.0:
        return 0
    return _orientation_exact(a[0], a[1], b[0], b[1], c[0], c[1])


def orientation_batch(a, b, pts: np.ndarray) -> np.ndarray:
    """Vectorised orientation(a, b, p) for many p; exact where the filter is unsure."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    detl = (bx - ax) * (pts[:, 1] - ay)
    detr = (by - ay) * (pts[:, 0] - ax)
    det = detl - detr
    bound = _ORIENT_EPS * (np.abs(detl) + np.abs(detr))
    out = np.zeros(len(pts), dtype=np.int8)
    out[det > bound] = 1
    out[det < -bound] = -1
    unsure = np.abs(det) <= bound
    unsure &= bound > 0.0
    for i in np.nonzero(unsure)[0]:
        out[i] = _orientation_exact(ax, ay, bx, by, pts[i, 0], pts[i, 1])
    return out


def on_segment(p, a, b) -> bool:
    """True iff p lies on the closed segment ab (exact)."""
    if orientation(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_properly_cross(p1, p2, q1, q2) -> bool:
    """Interiors cross at a single point; touching or collinear overlap is not proper."""
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    if d1 == d2 or d1 == 0 or d2 == 0:
        return False
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    return d3 != d4 and d3 != 0 and d4 != 0


def segments_touch(p1, p2, q1, q2) -> bool:
    """Any non-proper contact: endpoint on the other segment or collinear overlap."""
    return (on_segment(q1, p1, p2) or on_segment(q2, p1, p2)
            or on_segment(p1, q1, q2) or on_segment(p2, q1, q2))


def polygon_signed_area(coords: np.ndarray) -> float:
    x = coords[:, 0]
    y = coords[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


class SimplePolygon:
    """Counterclockwise simple polygon. Collinear (straight-angle) vertices are allowed."""

    __slots__ = ("vertices", "_coords", "_reflex")

    def __init__(self, vertices: Sequence, validate: bool = False):
        self.vertices: tuple[Point2, ...] = tuple(
            Point2(float(v[0]), float(v[1])) for v in vertices)
        self._coords: np.ndarray | None = None
        self._reflex: np.ndarray | None = None
        if validate:
            self.validate()

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplePolygon) and self.vertices == other.vertices

    def __repr__(self) -> str:
        return f"SimplePolygon({len(self.vertices)} vertices)"

    @property
    def coords(self) -> np.ndarray:
        if self._coords is None:
            self._coords = np.asarray(self.vertices, dtype=float)
        return self._coords

    def signed_area(self) -> float:
        return polygon_signed_area(self.coords)

    def edges(self):
        verts = self.vertices
        m = len(verts)
        for i in range(m):
            yield verts[i], verts[(i + 1) % m]

    def validate(self) -> None:
        verts = self.vertices
        m = len(verts)
        if m < 3:
            raise NonSimplePolygon(f"need at least 3 vertices, got {m}")
        if not all(math.isfinite(v.x) and math.isfinite(v.y) for v in verts):
            raise NonSimplePolygon("non-finite vertex coordinate")
        if len(set(verts)) != m:
            raise NonSimplePolygon("repeated vertex")
        for i in range(m):
            a1, a2 = verts[i], verts[(i + 1) % m]
            if a1 == a2:
                raise NonSimplePolygon("zero-length edge")
            for j in range(i + 1, m):
                b1, b2 = verts[j], verts[(j + 1) % m]
                adjacent = (j == i + 1) or (i == 0 and j == m - 1)
                if adjacent:
                    # Adjacent edges may only meet at the shared vertex.
                    shared = a2 if j == i + 1 else a1
                    far_a = a1 if j == i + 1 else a2
                    far_b = b2 if j == i + 1 else b1
                    if on_segment(far_b, a1, a2) and far_b != shared:
                        raise NonSimplePolygon("adjacent edges overlap")
                    if on_segment(far_a, b1, b2) and far_a != shared:
                        raise NonSimplePolygon("adjacent edges overlap")
                else:
                    if segments_properly_cross(a1, a2, b1, b2) or \
                            segments_touch(a1, a2, b1, b2):
                        raise NonSimplePolygon(
                            f"edges {i} and {j} intersect")
        if self.signed_area() <= 0.0:
            raise NonSimplePolygon("vertices are not counterclockwise")

    def contains(self, p) -> int:
        """1 strictly inside, 0 on the boundary, -1 outside."""
        return point_in_polygon(p, self.vertices)

    def is_convex(self) -> bool:
        return not bool(self.reflex_mask().any())

    def reflex_mask(self) -> np.ndarray:
        """True at vertices whose interior angle exceeds pi."""
        if self._reflex is None:
            verts = self.vertices
            m = len(verts)
            mask = np.zeros(m, dtype=bool)
            for i in range(m):
                mask[i] = orientation(verts[i - 1], verts[i], verts[(i + 1) % m]) < 0
            self._reflex = mask
        return self._reflex

    def reversed(self) -> "SimplePolygon":
        return SimplePolygon(tuple(reversed(self.vertices)))


def point_in_polygon(p, vertices: Sequence) -> int:
    """Crossing-number membership with exact boundary detection: 1/0/-1."""
    m = len(vertices)
    px, py = p[0], p[1]
    inside = False
    for i in range(m):
        a = vertices[i]
        b = vertices[(i + 1) % m]
        if on_segment(p, a, b):
            return 0
        if (a[1] > py) != (b[1] > py):
            # p strictly left of the edge at its own height toggles parity.
            side = orientation(a, b, p)
            if b[1] > a[1]:
                if side > 0:
                    inside = not inside
            else:
                if side < 0:
                    inside = not inside
    return 1 if inside else -1


def point_in_polygon_batch(pts: np.ndarray, poly: "SimplePolygon") -> np.ndarray:
    """Vectorised membership codes 1/0/-1; near-boundary points re-checked exactly."""
    n = len(pts)
    codes = np.empty(n, dtype=np.int8)
    if n == 0:
        return codes
    px = pts[:, 0]
    py = pts[:, 1]
    inside = np.zeros(n, dtype=bool)
    unsure = np.zeros(n, dtype=bool)
    coords = poly.coords
    m = len(coords)
    for i in range(m):
        ax, ay = coords[i]
        bx, by = coords[(i + 1) % m]
        t1 = (bx - ax) * (py - ay)
        t2 = (by - ay) * (px - ax)
        side = t1 - t2
        bound = _ORIENT_EPS * (np.abs(t1) + np.abs(t2))
        zeroish = np.abs(side) <= bound
        unsure |= zeroish & (px >= min(ax, bx) - 1e-12) & (px <= max(ax, bx) + 1e-12) \
            & (py >= min(ay, by) - 1e-12) & (py <= max(ay, by) + 1e-12)
        cond = (ay > py) != (by > py)
        unsure |= cond & zeroish
        if by > ay:
            inside ^= cond & (side > bound)
        else:
            inside ^= cond & (side < -bound)
    codes[:] = np.where(inside, 1, -1)
    for i in np.nonzero(unsure)[0]:
        codes[i] = point_in_polygon(pts[i], poly.vertices)
    return codes


def triangulate(poly: SimplePolygon) -> list[tuple[int, int, int]]:
    """Ear-clipping triangulation; returns ccw index triples into poly.vertices."""
    poly.validate()
    verts = poly.vertices
    idx = list(range(len(verts)))
    triangles: list[tuple[int, int, int]] = []

    def is_ear(pos: int) -> bool:
        i_prev = idx[pos - 1]
        i_cur = idx[pos]
        i_next = idx[(pos + 1) % len(idx)]
        a, b, c = verts[i_prev], verts[i_cur], verts[i_next]
        if orientation(a, b, c) <= 0:
            return False
        for other in idx:
            if other in (i_prev, i_cur, i_next):
                continue
            q = verts[other]
            if orientation(a, b, q) >= 0 and orientation(b, c, q) >= 0 \
                    and orientation(c, a, q) >= 0:
                return False
        return True

    pos = 0
    stall = 0
    while len(idx) > 3:
        if is_ear(pos):
            i_prev = idx[pos - 1]
            i_cur = idx[pos]
            i_next = idx[(pos + 1) % len(idx)]
            triangles.append((i_prev, i_cur, i_next))
            idx.pop(pos)
            pos %= len(idx)
            stall = 0
        else:
            pos = (pos + 1) % len(idx)
            stall += 1
            if stall > len(idx):
                raise NonSimplePolygon("no ear found; polygon is degenerate")
    a, b, c = idx
    if orientation(verts[a], verts[b], verts[c]) <= 0:
        raise NonSimplePolygon("degenerate final triangle")
    triangles.append((a, b, c))
    return triangles


def _triangle_diagonals(poly: SimplePolygon,
                        triangles: Sequence[tuple[int, int, int]]):
    """Internal diagonals of a triangulation: {(i, j): (tri_a, tri_b)}."""
    m = len(poly.vertices)
    edge_owner: dict[tuple[int, int], list[int]] = {}
    for t, tri in enumerate(triangles):
        for k in range(3):
            i, j = tri[k], tri[(k + 1) % 3]
            key = (min(i, j), max(i, j))
            edge_owner.setdefault(key, []).append(t)
    diagonals = {}
    for (i, j), owners in edge_owner.items():
        boundary = (j == i + 1) or (i == 0 and j == m - 1)
        if not boundary and len(owners) == 2:
            diagonals[(i, j)] = tuple(owners)
    return diagonals


@dataclass(frozen=True)
class PolygonCut:
    chord: SplitSegment
    left_polygon: SimplePolygon
    right_polygon: SimplePolygon
    left_points: frozenset[int]
    right_points: frozenset[int]


def _locate_on_boundary(poly: SimplePolygon, p: Point2):
    """('vertex', i) or ('edge', i) for a point on the boundary, else None."""
    verts = poly.vertices
    m = len(verts)
    for i, v in enumerate(verts):
        if v == p:
            return ("vertex", i)
    for i in range(m):
        if on_segment(p, verts[i], verts[(i + 1) % m]):
            return ("edge", i)
    return None


def split_polygon_by_chord(poly: SimplePolygon, a: Point2, b: Point2,
                           loc_a=None, loc_b=None):
    """Split poly along interior chord a-b. Returns (left, right) sub-polygons,
    left being the one on the ccw-left of the directed chord a -> b.

    loc_a/loc_b are optional precomputed boundary locations ('vertex'|'edge', i);
    chord endpoints produced by ray shooting carry float rounding, so exact
    relocation cannot be relied on for them.
    """
    loc_a = loc_a or _locate_on_boundary(poly, a)
    loc_b = loc_b or _locate_on_boundary(poly, b)
    if loc_a is None or loc_b is None:
        raise DegenerateInput("chord endpoint not on the polygon boundary")
    verts = poly.vertices
    m = len(verts)

    def next_vertex_index(loc):
        # First original vertex strictly after this boundary location, walking ccw.
        kind, i = loc
        return (i + 1) % m

    def walk(start_pt: Point2, start_loc, stop_pt: Point2, stop_loc):
        # Boundary arc from start to stop (ccw), including both chord endpoints.
        chain = [start_pt]
        kind, i = start_loc
        j = i if kind == "vertex" else next_vertex_index(start_loc)
        stop_kind, stop_i = stop_loc
        guard = 0
        while True:
            guard += 1
            if guard > 2 * m + 4:
                raise DegenerateInput("boundary walk failed to terminate")
            v = verts[j % m]
            if v != chain[-1]:
                chain.append(v)
            # Stop once the stop location's edge/vertex has been reached.
            if stop_kind == "vertex" and j % m == stop_i:
                chain.pop()  # stop vertex re-added below as the chord endpoint
                break
            if stop_kind == "edge" and j % m == stop_i:
                break
            j += 1
        if chain[-1] != stop_pt:
            chain.append(stop_pt)
        return chain

    # Left sub-polygon closes with directed chord edge a -> b, so its arc runs b ... a.
    left_chain = walk(b, loc_b, a, loc_a)
    right_chain = walk(a, loc_a, b, loc_b)
    left = SimplePolygon(left_chain)
    right = SimplePolygon(right_chain)
    if len(left) < 3 or len(right) < 3:
        raise DegenerateInput("chord produced a degenerate sub-polygon")
    return left, right


def classify_points_by_chord(pts: Sequence[WeightedPoint], a: Point2, b: Point2,
                             left_poly: SimplePolygon):
    """Partition point ids by cut side via containment in the left sub-polygon
    (a sign test against the chord line misplaces points when its supporting
    line re-enters a nonconvex parent).  The chord belongs to the left
    sub-polygon's boundary, so points exactly on it land left."""
    coords = np.asarray([wp.pos for wp in pts], dtype=float)
    codes = point_in_polygon_batch(coords, left_poly)
    left = frozenset(wp.id for wp, c in zip(pts, codes) if c >= 0)
    right = frozenset(wp.id for wp in pts if wp.id not in left)
    return left, right


def _ray_first_boundary_hit(poly: SimplePolygon, origin_index: int,
                            direction: tuple[float, float]):
    """First boundary intersection of the ray from vertex origin_index; returns
    (point, location) or None. Edges incident to the origin are ignored, and
    hits within 1e-9 of an edge endpoint snap onto that vertex."""
    verts = poly.vertices
    m = len(verts)
    o = verts[origin_index]
    dx, dy = direction
    best = None
    for i in range(m):
        if i == origin_index or (i + 1) % m == origin_index:
            continue
        p = verts[i]
        q = verts[(i + 1) % m]
        ex, ey = q.x - p.x, q.y - p.y
        denom = dx * ey - dy * ex
        if denom == 0.0:
            continue
        # Solve o + tau*d = p + u*e.
        tau = ((p.x - o.x) * ey - (p.y - o.y) * ex) / denom
        u = ((p.x - o.x) * dy - (p.y - o.y) * dx) / denom
        if tau <= 1e-12 or u < -1e-12 or u > 1.0 + 1e-12:
            continue
        if best is None or tau < best[0]:
            if u < 1e-9:
                best = (tau, verts[i], ("vertex", i))
            elif u > 1.0 - 1e-9:
                best = (tau, verts[(i + 1) % m], ("vertex", (i + 1) % m))
            else:
                best = (tau, Point2(p.x + u * ex, p.y + u * ey), ("edge", i))
    if best is None:
        return None
    return best[1], best[2]


def _ceil_two_thirds(n: int) -> int:
    return -(-2 * n // 3)


def _chord_candidate_ok(n_left: int, n_right: int, n: int) -> bool:
    cap = _ceil_two_thirds(n)
    return n_left <= cap and n_right <= cap and n_left >= 1 and n_right >= 1


def _evaluate_chord(poly, pts, a: Point2, b: Point2, loc_a=None, loc_b=None):
    """Try the chord in both orientations; return a PolygonCut or None."""
    n = len(pts)
    try:
        left, right = split_polygon_by_chord(poly, a, b, loc_a, loc_b)
    except DegenerateInput:
        return None
    for (pa, pb, lp, rp) in ((a, b, left, right), (b, a, right, left)):
        lids, rids = classify_points_by_chord(pts, pa, pb, lp)
        if _chord_candidate_ok(len(lids), len(rids), n):
            return PolygonCut(SplitSegment(pa, pb), lp, rp, lids, rids)
    return None


def _assign_points_to_triangles(poly, triangles, pts):
    """Index of the first triangle containing each point (inclusive of edges)."""
    coords = np.asarray([wp.pos for wp in pts], dtype=float)
    n = len(pts)
    owner = np.full(n, -1, dtype=int)
    verts = poly.vertices
    for t, (i, j, k) in enumerate(triangles):
        undecided = owner < 0
        if not undecided.any():
            break
        sub = coords[undecided]
        s1 = orientation_batch(verts[i], verts[j], sub)
        s2 = orientation_batch(verts[j], verts[k], sub)
        s3 = orientation_batch(verts[k], verts[i], sub)
        inside = (s1 >= 0) & (s2 >= 0) & (s3 >= 0)
        ids = np.nonzero(undecided)[0][inside]
        owner[ids] = t
    return owner


def _centroid_triangle(triangles, diagonals, weights):
    """Triangle all of whose dual-tree branches weigh less than half the total."""
    nt = len(triangles)
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = {t: [] for t in range(nt)}
    for diag, (ta, tb) in diagonals.items():
        adj[ta].append((tb, diag))
        adj[tb].append((ta, diag))
    total = int(weights.sum())

    def branch_weight(frm: int, to: int) -> int:
        # Weight of the dual-tree component containing `to` after removing edge (frm, to).
        seen = {frm, to}
        stack = [to]
        acc = 0
        while stack:
            t = stack.pop()
            acc += int(weights[t])
            for nbr, _ in adj[t]:
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append(nbr)
        return acc

    cur = 0
    visited = set()
    while True:
        visited.add(cur)
        move = None
        for nbr, _ in adj[cur]:
            if branch_weight(cur, nbr) * 2 > total:
                move = nbr
                break
        if move is None or move in visited:
            return cur
        cur = move


def _wedge_sweep_candidates(poly, pts, tri):
    """Chord candidates sweeping rays from each corner of triangle `tri` through
    its interior wedge, one candidate direction between consecutive events."""
    verts = poly.vertices
    coords = poly.coords
    pt_xy = np.asarray([wp.pos for wp in pts], dtype=float)
    out = []
    ia, ib, ic = tri
    for anchor, left_i, right_i in ((ia, ib, ic), (ib, ic, ia), (ic, ia, ib)):
        a = verts[anchor]
        bdir = (verts[left_i].x - a.x, verts[left_i].y - a.y)
        cdir = (verts[right_i].x - a.x, verts[right_i].y - a.y)
        base = math.atan2(bdir[1], bdir[0])
        span = (math.atan2(cdir[1], cdir[0]) - base) % (2.0 * math.pi)
        if span <= 0.0:
            continue
        events = [0.0, span]
        sources = [pt_xy] if len(pt_xy) else []
        sources.append(coords)
        for arr in sources:
            dx = arr[:, 0] - a.x
            dy = arr[:, 1] - a.y
            ang = (np.arctan2(dy, dx) - base) % (2.0 * math.pi)
            keep = (ang > 1e-12) & (ang < span - 1e-12) & ((dx != 0) | (dy != 0))
            events.extend(ang[keep].tolist())
        events = sorted(set(events))
        for lo, hi in zip(events, events[1:]):
            if hi - lo < 1e-12:
                continue
            theta = base + 0.5 * (lo + hi)
            out.append((anchor, (math.cos(theta), math.sin(theta))))
    return out


def balanced_cut(poly: SimplePolygon, pts: Sequence[WeightedPoint]) -> PolygonCut:
    """Chord of poly splitting pts so that each side holds at most ceil(2n/3) ids.

    Tries triangulation diagonals first; when every diagonal is lopsided (a single
    heavy triangle), sweeps chords from the corners of the dual-tree centroid
    triangle through its interior, which always reaches the balance window for
    points in distinct positions.
    """
    n = len(pts)
    if n < 2:
        raise DegenerateInput(f"balanced_cut needs at least 2 points, got {n}")
    triangles = triangulate(poly)
    diagonals = _triangle_diagonals(poly, triangles)
    verts = poly.vertices
    pt_xy = np.asarray([wp.pos for wp in pts], dtype=float)

    # Rank diagonals by float balance, then evaluate exactly in that order.
    ranked = []
    for (i, j) in sorted(diagonals):
        sign = np.sign((verts[j].x - verts[i].x) * (pt_xy[:, 1] - verts[i].y)
                       - (verts[j].y - verts[i].y) * (pt_xy[:, 0] - verts[i].x))
        nl = int(np.sum(sign >= 0))
        ranked.append((abs(n - 2 * nl), (i, j)))
    ranked.sort()
    for _, (i, j) in ranked:
        cut = _evaluate_chord(poly, pts, verts[i], verts[j])
        if cut is not None:
            return cut

    # No diagonal balances: sweep through the centroid triangle of the dual tree.
    owner = _assign_points_to_triangles(poly, triangles, pts)
    weights = np.bincount(owner[owner >= 0], minlength=len(triangles))
    centroid = _centroid_triangle(triangles, diagonals, weights)
    best = None
    for anchor, direction in _wedge_sweep_candidates(poly, pts, triangles[centroid]):
        hit = _ray_first_boundary_hit(poly, anchor, direction)
        if hit is None:
            continue
        hit_pt, hit_loc = hit
        if hit_pt == verts[anchor]:
            continue
        cut = _evaluate_chord(poly, pts, verts[anchor], hit_pt,
                              ("vertex", anchor), hit_loc)
        if cut is not None:
            bal = abs(len(cut.left_points) - len(cut.right_points))
            if best is None or bal < best[0]:
                best = (bal, cut)
            if bal <= 1:
                break
    if best is not None:
        return best[1]
    raise BalanceNotAchieved(
        "no chord met the two-thirds window; are point positions distinct?")
