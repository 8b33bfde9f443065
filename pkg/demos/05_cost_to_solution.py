#!/usr/bin/env python3
"""Is a wider stencil worth it?  Stability + dispersion + roofline, combined.

For a fixed physical problem, a higher order needs fewer points per
wavelength (coarser grid, fewer points, longer stable step) but does more
work per point.  Summing it all up, high orders win decisively on
wall-clock estimates.
"""

import os

from fdroof import BUILTIN_MACHINES, CostScenario, cost_csv, scenario_table

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

# The default scenario: 500^3-point model at order 2, 1000 time steps,
# points-per-wavelength easing from 6 (order 2) to 2 (order 24).
scenario = CostScenario()
machines = [BUILTIN_MACHINES["xeon-e5-2697v2-2s"], BUILTIN_MACHINES["phi-7120a"]]
rows = scenario_table(scenario, (2, 6, 12, 18, 24), machines)

print("order    h     dt       grid points   steps   OI     total GFLOPs")
for r in rows:
    print(f"  {r.order:3d}  {r.h:4.1f}  {r.dt:.4f}  {r.n_grid:13.4g}  {r.n_t:5d}  "
          f"{r.oi:5.3f}  {r.total_gflops:10.4g}")

print("\nestimated optimal runtimes (uncapped oi*B model | roofline-capped bound):")
for r in rows:
    cells = []
    for mc in r.machine_costs:
        cells.append(f"{mc.machine}: {mc.runtime_s:3d}s at {mc.predicted_gflops:6.1f} "
                     f"(cap {mc.attainable_gflops:6.1f}) GFLOPS")
    print(f"  order {r.order:2d}:  " + "   ".join(cells))

# Order 24 does ~8x less total work than order 2 *and* runs at ~7x the
# GFLOPS -- the runtime estimate drops from 20 s to 1 s on the Xeon.
ratio = rows[0].total_gflops / rows[-1].total_gflops
print(f"\ntotal work ratio, order 2 vs 24: {ratio:.1f}x")

path = os.path.join(OUT, "cost_table.csv")
with open(path, "w", encoding="utf-8", newline="\n") as fh:
    fh.write(cost_csv(rows))
print(f"wrote {path}")
