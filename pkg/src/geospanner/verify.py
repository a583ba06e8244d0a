"""Brute-force certification of fault-tolerant stretch and empirical size
scaling.

Exhaustive mode enumerates every fault set of size 0..k and every surviving
pair, computing spanner path costs under the weighted convention: a path costs
the sum over its edges of w(u) + d(u, v) + w(v), so a single edge costs exactly
the weighted metric of its endpoints.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .errors import BudgetTooLarge, FaultedEndpoint
from .geodesic import GeodesicEngine, region_of
from .spanner import SpannerGraph

EXHAUSTIVE_CHECK_BUDGET = 10 ** 8
REL_SLACK = 1e-9


@dataclass(frozen=True)
class StretchReport:
    max_stretch: float
    witness: tuple | None            # (fault tuple, p, q) attaining max_stretch
    pairs_checked: int
    fault_sets_checked: int
    exhaustive: bool
    all_reachable: bool
    unreachable: tuple | None        # first (fault tuple, p, q) with no path
    lower_bound_ok: bool

    def ok(self, target: float) -> bool:
        return self.all_reachable and self.lower_bound_ok \
            and self.max_stretch <= target * (1.0 + REL_SLACK)


def graph_distance(graph: SpannerGraph, weights: Mapping[int, float] | Sequence[float],
                   faults, p: int, q: int) -> float:
    """Weighted shortest-path cost between p and q in graph minus the faulted
    vertices; math.inf when unreachable."""
    faults = frozenset(faults)
    if p in faults or q in faults:
        raise FaultedEndpoint(f"query endpoint in fault set {sorted(faults)}")
    if p == q:
        return 0.0
    adj = graph.adjacency()
    dist = {p: 0.0}
    heap = [(0.0, p)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == q:
            return d
        if d > dist.get(u, math.inf):
            continue
        for v, length in adj[u]:
            if v in faults:
                continue
            nd = d + weights[u] + length + weights[v]
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return math.inf


def pairwise_weighted(domain, points) -> np.ndarray:
    """Matrix of the weighted metric over the instance points."""
    ordered = sorted(points, key=lambda wp: wp.id)
    positions = np.asarray([wp.pos for wp in ordered], dtype=float)
    w = np.asarray([wp.weight for wp in ordered], dtype=float)
    engine = GeodesicEngine(region_of(domain), positions)
    d = engine.pairwise(range(len(ordered)))
    # Sum the weight term first: both addends are exactly symmetric, so the
    # result is too (adding w_i then w_j would round asymmetrically).
    dw = d + (w[:, None] + w[None, :])
    np.fill_diagonal(dw, 0.0)
    return dw


def _fault_sets_exhaustive(ids: Sequence[int], k: int):
    for size in range(0, k + 1):
        yield from itertools.combinations(ids, size)


def _fault_sets_sampled(ids: Sequence[int], k: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    yield ()
    for _ in range(count):
        size = int(rng.integers(0, k + 1))
        if size == 0:
            yield ()
        else:
            yield tuple(sorted(rng.choice(ids, size=size, replace=False).tolist()))


def certify_stretch(graph: SpannerGraph, instance, params, budget="exhaustive",
                    sample_seed: int = 24389, dw: np.ndarray | None = None) -> StretchReport:
    """Max over fault sets and surviving pairs of spanner cost / weighted metric.

    budget is either the string "exhaustive" or an int sample count of fault
    sets (drawn with a fixed-seed generator, reported as non-exhaustive).
    """
    points = sorted(instance.points, key=lambda wp: wp.id)
    n = len(points)
    k = params.k
    if n != graph.n:
        raise ValueError("graph and instance disagree on n")
    exhaustive = budget == "exhaustive"
    if exhaustive:
        checks = math.comb(n, min(k, n)) * n * n
        if checks > EXHAUSTIVE_CHECK_BUDGET:
            raise BudgetTooLarge(
                f"{checks:.2e} checks exceed the 1e8 exhaustive budget; "
                "use a sample count instead")
        fault_iter = _fault_sets_exhaustive(range(n), min(k, max(n - 2, 0)))
    else:
        fault_iter = _fault_sets_sampled(range(n), min(k, max(n - 2, 0)),
                                         int(budget), sample_seed)
    if dw is None:
        dw = pairwise_weighted(instance.domain, points)
    w = np.asarray([wp.weight for wp in points], dtype=float)
    edges = graph.sorted_edges()
    eu = np.asarray([e[0] for e in edges], dtype=int)
    ev = np.asarray([e[1] for e in edges], dtype=int)
    cost = np.asarray([w[u] + length + w[v] for u, v, length in edges])

    max_stretch = 0.0
    witness = None
    pairs_checked = 0
    fault_sets_checked = 0
    all_reachable = True
    unreachable = None
    lower_bound_ok = True
    for faults in fault_iter:
        fault_sets_checked += 1
        remaining = np.asarray([i for i in range(n) if i not in faults], dtype=int)
        if len(remaining) < 2:
            continue
        if len(faults):
            fmask = np.ones(n, dtype=bool)
            fmask[list(faults)] = False
            keep = fmask[eu] & fmask[ev]
            g = csr_matrix((cost[keep], (eu[keep], ev[keep])), shape=(n, n))
        else:
            g = csr_matrix((cost, (eu, ev)), shape=(n, n))
        dist = _csgraph_dijkstra(g, directed=False, indices=remaining)
        dist = dist[:, remaining]
        sub_dw = dw[np.ix_(remaining, remaining)]
        iu, ju = np.triu_indices(len(remaining), 1)
        d_vals = dist[iu, ju]
        m_vals = sub_dw[iu, ju]
        pairs_checked += len(iu)
        bad = ~np.isfinite(d_vals)
        if bad.any() and all_reachable:
            b = int(np.nonzero(bad)[0][0])
            all_reachable = False
            unreachable = (tuple(faults), int(remaining[iu[b]]), int(remaining[ju[b]]))
        finite = np.isfinite(d_vals)
        if (d_vals[finite] < m_vals[finite] * (1.0 - REL_SLACK)).any():
            lower_bound_ok = False
        ratios = np.where(finite, d_vals / m_vals, 0.0)
        if len(ratios):
            b = int(np.argmax(ratios))
            if ratios[b] > max_stretch:
                max_stretch = float(ratios[b])
                witness = (tuple(faults), int(remaining[iu[b]]), int(remaining[ju[b]]))
    return StretchReport(max_stretch, witness, pairs_checked, fault_sets_checked,
                         exhaustive, all_reachable, unreachable, lower_bound_ok)


def size_scaling_report(seed: int, n_list: Sequence[int], k: int, epsilon: float,
                        mode: str = "simple", h_list: Sequence[int] = (),
                        n_fixed: int = 256, polygon_vertices: int = 16) -> list[dict]:
    """Edge counts of freshly built spanners across one generator family,
    normalised by the expected growth term."""
    from .instances import generate_instance
    from .spanner import (SpannerParams, build_vftswp_polygonal_domain,
                          build_vftswp_simple_polygon)

    params = SpannerParams(k=k, epsilon=epsilon)
    rows: list[dict] = []
    if mode == "simple":
        for n in n_list:
            inst = generate_instance(n, 0, polygon_vertices, "uniform01", seed)
            graph = build_vftswp_simple_polygon(inst.domain.outer, inst.points, params)
            denom = k * n * (math.log2(n) ** 2) if n > 1 else 0.0
            rows.append({
                "n": int(n),
                "edges": graph.edge_count(),
                "ratio": graph.edge_count() / denom if denom else 0.0,
            })
    elif mode == "domain":
        for h in h_list:
            inst = generate_instance(n_fixed, h, polygon_vertices, "uniform01", seed)
            graph = build_vftswp_polygonal_domain(inst.domain, inst.points, params)
            rows.append({
                "h": int(h),
                "n": int(n_fixed),
                "edges": graph.edge_count(),
                "ratio": graph.edge_count() / math.sqrt(h + 1),
            })
    else:
        raise ValueError(f"unknown scaling mode {mode!r}")
    return rows
