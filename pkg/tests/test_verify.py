import itertools
import math

import numpy as np
import pytest

from geospanner import (
    SpannerGraph,
    SpannerParams,
    build_vftswp_simple_polygon,
    certify_stretch,
    generate_instance,
    graph_distance,
    size_scaling_report,
    weighted_distance,
)
from geospanner.errors import BudgetTooLarge, FaultedEndpoint
from geospanner.verify import pairwise_weighted


def line_graph(weights, lengths):
    g = SpannerGraph(len(weights))
    for i, length in enumerate(lengths):
        g.add_edge(i, i + 1, length)
    return g


class TestGraphDistance:
    def test_single_edge_is_weighted_metric(self):
        g = SpannerGraph(2)
        g.add_edge(0, 1, 5.0)
        assert graph_distance(g, [1.0, 2.0], (), 0, 1) == pytest.approx(8.0)

    def test_two_hop_pays_middle_twice(self):
        g = line_graph([1.0, 3.0, 2.0], [4.0, 6.0])
        # (w0 + 4 + w1) + (w1 + 6 + w2) = 8 + 11
        assert graph_distance(g, [1.0, 3.0, 2.0], (), 0, 2) == pytest.approx(19.0)

    def test_unreachable(self):
        g = line_graph([0.0, 0.0, 0.0], [1.0, 1.0])
        assert graph_distance(g, [0.0] * 3, {1}, 0, 2) == math.inf

    def test_faulted_endpoint_raises(self):
        g = line_graph([0.0, 0.0], [1.0])
        with pytest.raises(FaultedEndpoint):
            graph_distance(g, [0.0, 0.0], {0}, 0, 1)

    def test_monotone_under_growing_faults(self):
        rng = np.random.default_rng(2)
        n = 9
        g = SpannerGraph(n)
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.5:
                    g.add_edge(u, v, float(rng.uniform(1, 5)))
        w = [float(x) for x in rng.uniform(0, 2, n)]
        chain = [(), (3,), (3, 5), (3, 5, 7)]
        prev = 0.0
        for faults in chain:
            d = graph_distance(g, w, faults, 0, 1)
            assert d >= prev - 1e-12
            prev = d


class TestCertify:
    def build(self, seed=42, n=14, k=1, eps=1.0):
        inst = generate_instance(n, 0, polygon_vertices=12,
                                 weight_dist="uniform01", seed=seed)
        params = SpannerParams(k=k, epsilon=eps)
        g = build_vftswp_simple_polygon(inst.domain.outer, inst.points, params)
        return inst, params, g

    def test_exhaustive_certifies(self):
        inst, params, g = self.build()
        rep = certify_stretch(g, inst, params, "exhaustive")
        assert rep.exhaustive
        assert rep.all_reachable and rep.lower_bound_ok
        assert 1.0 - 1e-9 <= rep.max_stretch <= math.sqrt(10) + 1.0
        assert rep.fault_sets_checked == 1 + inst.n

    def test_witness_reproducible(self):
        inst, params, g = self.build()
        rep = certify_stretch(g, inst, params, "exhaustive")
        faults, p, q = rep.witness
        w = [wp.weight for wp in inst.points]
        d = graph_distance(g, w, faults, p, q)
        dw = weighted_distance(inst.points[p], inst.points[q], inst.domain)
        assert d / dw == pytest.approx(rep.max_stretch, rel=1e-9)

    def test_complete_graph_stretch_one(self):
        inst, params, _ = self.build(n=8)
        dw = pairwise_weighted(inst.domain, inst.points)
        g = SpannerGraph(8)
        for u in range(8):
            for v in range(u + 1, 8):
                g.add_edge(u, v, float(dw[u, v]) - inst.points[u].weight
                           - inst.points[v].weight)
        rep = certify_stretch(g, inst, params, "exhaustive")
        assert rep.max_stretch == pytest.approx(1.0, rel=1e-9)

    def test_edgeless_two_points_unreachable(self):
        inst = generate_instance(2, 0, polygon_vertices=8,
                                 weight_dist="zero", seed=4)
        params = SpannerParams(k=1, epsilon=1.0)
        rep = certify_stretch(SpannerGraph(2), inst, params, "exhaustive")
        assert not rep.all_reachable
        assert rep.unreachable is not None

    def test_budget_guard(self):
        inst = generate_instance(60, 0, polygon_vertices=8,
                                 weight_dist="zero", seed=4)
        params = SpannerParams(k=5, epsilon=1.0)
        with pytest.raises(BudgetTooLarge):
            certify_stretch(SpannerGraph(60), inst, params, "exhaustive")

    def test_sampled_mode(self):
        inst, params, g = self.build()
        rep = certify_stretch(g, inst, params, 25)
        assert not rep.exhaustive
        assert rep.fault_sets_checked == 26
        assert rep.max_stretch <= math.sqrt(10) + 1.0

    def test_deleting_edges_can_fail(self):
        inst, params, g = self.build(n=10)
        # removing every edge at one vertex must break reachability
        victim = 3
        pruned = SpannerGraph(g.n)
        for (u, v), w in g.edges.items():
            if victim not in (u, v):
                pruned.add_edge(u, v, w)
        rep = certify_stretch(pruned, inst, params, "exhaustive")
        assert not rep.all_reachable


class TestMetricAxioms:
    def test_triangle_inequality_exhaustive(self):
        inst = generate_instance(16, 1, polygon_vertices=10,
                                 weight_dist="uniform01", seed=77)
        dw = pairwise_weighted(inst.domain, inst.points)
        n = inst.n
        assert np.allclose(dw, dw.T)
        assert np.all(np.diag(dw) == 0)
        for i, j, k in itertools.permutations(range(n), 3):
            assert dw[i, j] <= dw[i, k] + dw[k, j] + 1e-9 * dw[i, j]

    def test_matches_weighted_distance(self):
        inst = generate_instance(10, 0, polygon_vertices=12,
                                 weight_dist="uniform01", seed=15)
        dw = pairwise_weighted(inst.domain, inst.points)
        for i in range(inst.n):
            for j in range(i + 1, inst.n):
                expect = weighted_distance(inst.points[i], inst.points[j], inst.domain)
                assert dw[i, j] == pytest.approx(expect, rel=1e-12)


class TestScalingReport:
    def test_simple_rows(self):
        rows = size_scaling_report(3, [16, 32], k=1, epsilon=1.0, mode="simple",
                                   polygon_vertices=10)
        assert [r["n"] for r in rows] == [16, 32]
        for r in rows:
            assert r["edges"] > 0
            assert r["ratio"] == r["edges"] / (r["n"] * math.log2(r["n"]) ** 2)

    def test_single_point_row(self):
        rows = size_scaling_report(3, [1], k=1, epsilon=1.0, mode="simple",
                                   polygon_vertices=8)
        assert rows[0]["edges"] == 0
        assert rows[0]["ratio"] == 0.0

    def test_domain_rows(self):
        rows = size_scaling_report(3, [], k=1, epsilon=1.0, mode="domain",
                                   h_list=[0, 1], n_fixed=24, polygon_vertices=10)
        assert [r["h"] for r in rows] == [0, 1]
        for r in rows:
            assert r["ratio"] == r["edges"] / math.sqrt(r["h"] + 1)
