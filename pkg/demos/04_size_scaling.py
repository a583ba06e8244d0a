"""Empirical size scaling of the constructions.

Edge counts should track k * n * (lg n)^2 for the simple-polygon builder and
pick up an extra sqrt(h+1) factor in domains; the normalised columns should
stay within a small constant band as n or h grows.
"""
from geospanner import size_scaling_report

print("simple polygon, k=1, eps=1")
print(f"{'n':>6} {'edges':>8} {'edges/(k n lg^2 n)':>20}")
for row in size_scaling_report(seed=7, n_list=[32, 64, 128, 256], k=1,
                               epsilon=1.0, mode="simple", polygon_vertices=14):
    print(f"{row['n']:>6} {row['edges']:>8} {row['ratio']:>20.3f}")

print()
print("polygonal domain, n=96 fixed, k=1, eps=1")
print(f"{'h':>6} {'edges':>8} {'edges/sqrt(h+1)':>17}")
for row in size_scaling_report(seed=7, n_list=[], k=1, epsilon=1.0,
                               mode="domain", h_list=[0, 1, 2, 4], n_fixed=96,
                               polygon_vertices=14):
    print(f"{row['h']:>6} {row['edges']:>8} {row['ratio']:>17.1f}")
