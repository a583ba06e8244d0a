"""Problem instances: weighted points in a polygonal domain, their random
generation, and canonical JSON serialization with content hashing."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateDomain, DegenerateInput, GenerationFailed
from .geodesic import PolygonalDomain
from .geometry import Point2, SimplePolygon, WeightedPoint, segments_properly_cross

COORD_BUDGET = 1e6
INSTANCE_FORMAT = "geospanner-instance"
SPANNER_FORMAT = "geospanner-spanner"


@dataclass
class Instance:
    domain: PolygonalDomain
    points: list[WeightedPoint]
    seed: int | None = None
    generator: dict | None = None
    scale: float = 1.0  # multiply stored coordinates by this to recover the input

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def h(self) -> int:
        return self.domain.h

    def validate(self) -> None:
        ids = sorted(wp.id for wp in self.points)
        if ids != list(range(len(self.points))):
            raise DegenerateInput("point ids must be 0..n-1")
        if len({wp.pos for wp in self.points}) != len(self.points):
            raise DegenerateInput("point positions must be pairwise distinct")
        for wp in self.points:
            if wp.weight < 0 or not math.isfinite(wp.weight):
                raise DegenerateInput(f"point {wp.id} has invalid weight {wp.weight}")
            if self.domain.contains(wp.pos) < 0:
                raise DegenerateInput(f"point {wp.id} lies outside the free space")


# ---------------------------------------------------------------------------
# Random generation.


def random_simple_polygon(rng: np.random.Generator, m: int,
                          lo: float = 0.0, hi: float = 100.0,
                          max_attempts: int = 200,
                          swap_cap: int = 1_000_000) -> SimplePolygon:
    """Random ccw simple polygon: random vertices on a random cycle, untangled
    by 2-opt reversals (each reversal strictly shortens the tour)."""
    m = int(m)
    if m < 3:
        raise DegenerateInput("polygon needs at least 3 vertices")
    for _ in range(max_attempts):
        coords = [Point2(float(x), float(y))
                  for x, y in rng.uniform(lo, hi, size=(m, 2))]
        order = list(range(m))
        rng.shuffle(order)
        if not _untangle(order, coords, swap_cap):
            continue
        poly = SimplePolygon([coords[i] for i in order])
        if poly.signed_area() < 0:
            poly = poly.reversed()
        try:
            poly.validate()
        except Exception:
            continue
        return poly
    raise GenerationFailed(f"could not untangle a simple {m}-gon")


def _untangle(order: list[int], coords: list[Point2], swap_cap: int) -> bool:
    m = len(order)
    swaps = 0
    changed = True
    while changed:
        changed = False
        for i in range(m):
            a1 = coords[order[i]]
            a2 = coords[order[(i + 1) % m]]
            for j in range(i + 1, m):
                if (j + 1) % m == i or (i + 1) % m == j:
                    continue
                b1 = coords[order[j]]
                b2 = coords[order[(j + 1) % m]]
                if segments_properly_cross(a1, a2, b1, b2):
                    order[i + 1:j + 1] = order[i + 1:j + 1][::-1]
                    swaps += 1
                    if swaps > swap_cap:
                        return False
                    changed = True
                    break
            if changed:
                break
    return True


def _place_holes(rng, outer: SimplePolygon, count: int, attempts: int = 600):
    holes: list[SimplePolygon] = []
    coords = outer.coords
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = float(min(hi - lo))
    for _ in range(count):
        placed = False
        for _ in range(attempts):
            mh = int(rng.integers(4, 9))
            center = rng.uniform(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo))
            radius = span * float(rng.uniform(0.04, 0.10))
            raw = random_simple_polygon(rng, mh, -1.0, 1.0, max_attempts=50)
            cand = SimplePolygon([
                (center[0] + radius * v.x, center[1] + radius * v.y)
                for v in raw.vertices])
            try:
                PolygonalDomain(outer, holes + [cand])
            except DegenerateDomain:
                continue
            holes.append(cand)
            placed = True
            break
        if not placed:
            raise GenerationFailed(
                f"could not place hole {len(holes)} after {attempts} attempts")
    return holes


def _sample_points(rng, domain: PolygonalDomain, n: int, weight_dist: str,
                   attempts_per_point: int = 2000):
    coords = domain.outer.coords
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    points: list[WeightedPoint] = []
    taken: set[Point2] = set()
    for pid in range(n):
        for _ in range(attempts_per_point):
            pos = Point2(*(float(c) for c in rng.uniform(lo, hi)))
            if pos in taken or domain.contains(pos) != 1:
                continue
            points.append(WeightedPoint(pid, pos, _draw_weight(rng, weight_dist)))
            taken.add(pos)
            break
        else:
            raise GenerationFailed(f"could not sample point {pid} in free space")
    return points


def _draw_weight(rng, dist: str) -> float:
    if dist == "zero":
        return 0.0
    if dist == "uniform01":
        return float(rng.random())
    if dist == "exp":
        return float(rng.exponential(1.0))
    raise ValueError(f"unknown weight distribution {dist!r}")


def generate_instance(n: int, holes: int = 0, polygon_vertices: int = 12,
                      weight_dist: str = "uniform01", seed: int | None = None) -> Instance:
    """Deterministic random instance: a 2-opt untangled outer polygon, rejection
    sampled disjoint holes, and points uniform in the free space."""
    if seed is None:
        raise GenerationFailed("a seed is required for reproducible generation")
    rng = np.random.default_rng(int(seed))
    outer = random_simple_polygon(rng, polygon_vertices)
    hole_list = _place_holes(rng, outer, holes) if holes else []
    domain = PolygonalDomain(outer, hole_list)
    points = _sample_points(rng, domain, n, weight_dist)
    instance = Instance(domain, points, seed=int(seed), generator={
        "n": int(n),
        "holes": int(holes),
        "polygon_vertices": int(polygon_vertices),
        "weight_dist": weight_dist,
    })
    instance.validate()
    return instance


# ---------------------------------------------------------------------------
# Serialization and hashing.


def instance_payload(instance: Instance) -> dict:
    return {
        "format": INSTANCE_FORMAT,
        "version": 1,
        "outer": [[v.x, v.y] for v in instance.domain.outer.vertices],
        "holes": [[[v.x, v.y] for v in hole.vertices]
                  for hole in instance.domain.holes],
        "points": [{"x": wp.pos.x, "y": wp.pos.y, "w": wp.weight}
                   for wp in sorted(instance.points, key=lambda wp: wp.id)],
        "seed": instance.seed,
        "generator": instance.generator,
    }


def _canonical_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def instance_hash(instance: Instance) -> str:
    return hashlib.sha256(_canonical_bytes(instance_payload(instance))).hexdigest()


def save_instance(instance: Instance, path) -> None:
    Path(path).write_bytes(_canonical_bytes(instance_payload(instance)))


def load_instance(path) -> Instance:
    payload = json.loads(Path(path).read_text())
    return instance_from_payload(payload)


def instance_from_payload(payload: dict) -> Instance:
    if payload.get("format") != INSTANCE_FORMAT:
        raise DegenerateInput("not an instance file")
    raw_coords = [abs(float(c)) for ring in [payload["outer"], *payload["holes"]]
                  for xy in ring for c in xy]
    raw_coords += [abs(float(p["x"])) for p in payload["points"]]
    raw_coords += [abs(float(p["y"])) for p in payload["points"]]
    peak = max(raw_coords, default=0.0)
    scale = 1.0
    while peak / scale > COORD_BUDGET:
        scale *= 10.0

    def pt(x, y):
        return Point2(float(x) / scale, float(y) / scale)

    outer = SimplePolygon([pt(x, y) for x, y in payload["outer"]])
    holes = [SimplePolygon([pt(x, y) for x, y in ring]) for ring in payload["holes"]]
    points = [WeightedPoint(i, pt(p["x"], p["y"]), float(p["w"]))
              for i, p in enumerate(payload["points"])]
    instance = Instance(PolygonalDomain(outer, holes), points,
                        seed=payload.get("seed"), generator=payload.get("generator"),
                        scale=scale)
    instance.validate()
    return instance


def spanner_payload(graph, instance: Instance, k: int, epsilon: float,
                    mode: str, seed=None, tool_version: str = "0.1.0") -> dict:
    return {
        "format": SPANNER_FORMAT,
        "version": 1,
        "n": graph.n,
        "k": int(k),
        "epsilon": float(epsilon),
        "mode": mode,
        "edges": [[u, v, w] for u, v, w in graph.sorted_edges()],
        "provenance": {
            "instance_sha256": instance_hash(instance),
            "tool_version": tool_version,
            "seed": seed,
        },
    }


def save_spanner(payload: dict, path) -> None:
    Path(path).write_bytes(_canonical_bytes(payload))


def load_spanner(path) -> dict:
    payload = json.loads(Path(path).read_text())
    if payload.get("format") != SPANNER_FORMAT:
        raise DegenerateInput("not a spanner file")
    return payload


def graph_from_payload(payload: dict):
    from .spanner import SpannerGraph

    graph = SpannerGraph(int(payload["n"]))
    for u, v, w in payload["edges"]:
        graph.add_edge(int(u), int(v), float(w))
    return graph
