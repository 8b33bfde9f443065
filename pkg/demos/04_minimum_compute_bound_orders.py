#!/usr/bin/env python3
"""Which discretization order saturates which machine?

Crossing the ridge point is the prerequisite for hitting peak FLOPS.  The
linear-OI kernels (acoustic, VTI) need very wide stencils; the TTI kernel's
quadratic OI growth gets it there by order 6 or 8.
"""

import os

from fdroof import (
    BUILTIN_EQUATIONS,
    BUILTIN_MACHINES,
    min_compute_bound_order,
    oi_curve,
    oi_curve_chart,
    operational_intensity,
    ridge_point,
    write_svg,
)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

equations = [BUILTIN_EQUATIONS[n] for n in ("acoustic", "vti", "tti")]
machines = list(BUILTIN_MACHINES.values())

print("minimum compute-bound spatial order (k = order + 1):")
header = "  equation  " + "".join(f"{m.name:>20s}" for m in machines)
print(header)
for eq in equations:
    row = f"  {eq.name:8s}  "
    for m in machines:
        order = min_compute_bound_order(eq, m)
        row += f"{order if order is not None else 'never':>20}"
    print(row)

# The Phi VTI/TTI cells deserve a second look; the closed forms put the
# boundary orders just below its 10.89 ridge:
phi = BUILTIN_MACHINES["phi-7120a"]
for eq_name, k in (("vti", 31), ("tti", 7)):
    oi = float(operational_intensity(BUILTIN_EQUATIONS[eq_name], k).oi)
    print(f"  note: {eq_name} at k={k} has OI {oi:.4f} < {ridge_point(phi):.2f}, "
          f"so order {k - 1} is still memory-bound on {phi.name}")

# A fixed-OI kernel can also never get there:
elastic = BUILTIN_EQUATIONS["elastic-stiff"]
print(f"  {elastic.name} (fixed OI 1.55): "
      f"{min_compute_bound_order(elastic, machines[0])} on every machine")

# The picture: three OI curves against three ridge markers.
curves = oi_curve(equations, k_min=3, k_max=35, machines=machines)
path = os.path.join(OUT, "oi_curves.svg")
write_svg(oi_curve_chart(curves), path)
print(f"\nwrote {path}")
