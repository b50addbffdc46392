#!/usr/bin/env python3
"""Run the plain colony on burma14 and watch the incumbent improve."""

from antsteer import AcsParams, load_bundled, run
from antsteer.oracle import exact_optimum

inst = load_bundled("burma14")
params = AcsParams(ants=30, iterations=250, seed=0)

improvements = []
events = []
record = run(inst, params, event_sink=events.append)

for e in events:
    if e["improved"]:
        improvements.append((e["iteration"], e["best_length"]))

print("improvement trajectory (iteration, best length):")
for it, length in improvements:
    print(f"  {it:4d}  {length}")

optimum = exact_optimum(inst).length
gap = 100.0 * (record.tour.length - optimum) / optimum
print(f"\nfinal best: {record.tour.length} "
      f"(found at iteration {record.iteration_found}, "
      f"ant {record.ant_index})")
print(f"exact optimum: {optimum}, gap {gap:.3f}%")
print(f"tour: {record.tour.order}")
