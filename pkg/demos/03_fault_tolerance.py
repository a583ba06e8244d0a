"""What k-vertex fault tolerance buys, and what breaking it looks like.

A k=2 spanner keeps every surviving pair within the stretch bound no matter
which two vertices disappear.  Deleting graph edges eventually breaks that
promise; the verifier exposes the first broken fault set and pair as a
reproducible witness.
"""
import math

from geospanner import (
    SpannerGraph,
    SpannerParams,
    build_vftswp_simple_polygon,
    certify_stretch,
    generate_instance,
    graph_distance,
    weighted_distance,
)

instance = generate_instance(n=18, holes=0, polygon_vertices=14,
                             weight_dist="uniform01", seed=4242)
params = SpannerParams(k=2, epsilon=1.0)
graph = build_vftswp_simple_polygon(instance.domain.outer, instance.points, params)
target = math.sqrt(10) + params.epsilon
weights = [wp.weight for wp in instance.points]

report = certify_stretch(graph, instance, params, "exhaustive")
print(f"k=2 spanner, {graph.edge_count()} edges: max stretch "
      f"{report.max_stretch:.4f} over {report.fault_sets_checked} fault sets -> "
      f"{'OK' if report.ok(target) else 'VIOLATION'}")

p, q = 0, 7
base = graph_distance(graph, weights, (), p, q)
print(f"\ndistance {p}-{q} with no faults:      {base:.4f}")
for faults in [(3,), (3, 11)]:
    d = graph_distance(graph, weights, faults, p, q)
    dw = weighted_distance(instance.points[p], instance.points[q], instance.domain)
    print(f"distance {p}-{q} with faults {str(faults):8}: {d:.4f} "
          f"(metric {dw:.4f}, stretch {d / dw:.3f})")

# Now sabotage the graph: drop every edge at two hub vertices.
crippled = SpannerGraph(graph.n)
victims = {p, 5}
for (u, v), w in graph.edges.items():
    if not (victims & {u, v}):
        crippled.add_edge(u, v, w)
bad = certify_stretch(crippled, instance, params, "exhaustive")
print(f"\nafter deleting all edges at vertices {sorted(victims)}: "
      f"reachable={bad.all_reachable}")
if bad.unreachable:
    faults, a, b = bad.unreachable
    print(f"witness: pair {a}-{b} unreachable under faults {list(faults)}")
