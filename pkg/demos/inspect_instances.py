#!/usr/bin/env python3
"""Load the bundled TSP instances and poke at their cost matrices."""

import numpy as np

from antsteer import list_bundled, load_bundled, tour_length
from antsteer.oracle import exact_optimum, nearest_neighbor_tour

print("bundled instances:")
for name in list_bundled():
    inst = load_bundled(name)
    print(f"  {inst.name:10s} n={inst.n:2d} type={inst.edge_weight_type}")

burma = load_bundled("burma14")
print(f"\nburma14 cost matrix is {burma.costs.shape}, "
      f"symmetric={burma.symmetric}")
print(f"cost(0, 1) = {burma.cost(0, 1)}, cost(1, 0) = {burma.cost(1, 0)}")
print(f"mean off-diagonal cost: "
      f"{burma.costs.sum() / (burma.n * (burma.n - 1)):.1f}")

# a tour is just a node permutation; its length closes the cycle
identity = list(range(burma.n))
print(f"\nidentity tour length: {tour_length(burma, identity)}")

greedy = nearest_neighbor_tour(burma)
print(f"nearest neighbor from node 0: {greedy.length} via {greedy.order}")

best = exact_optimum(burma)
print(f"exact optimum ({best.method}): {best.length} via {best.order}")
print(f"greedy is {100.0 * (greedy.length - best.length) / best.length:.1f}% "
      f"above optimal")
