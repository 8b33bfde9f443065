#!/usr/bin/env python3
"""Operational intensity of the wave-equation kernels.

OI = FLOPs per byte of memory traffic decides everything in the roofline
model.  FLOPs grow with the stencil size k; traffic does not (each field
value crosses the bus once per time step under the infinite-cache model),
so higher-order discretizations are denser in arithmetic.
"""

from fdroof import (
    BUILTIN_EQUATIONS,
    bytes_per_point,
    kernel_flops,
    operational_intensity,
    traffic_model,
)

acoustic = BUILTIN_EQUATIONS["acoustic"]
vti = BUILTIN_EQUATIONS["vti"]
tti = BUILTIN_EQUATIONS["tti"]

print("FLOPs per grid point and OI versus stencil size:")
print("  k    acoustic            vti                 tti")
for k in (3, 7, 13, 25):
    cells = []
    for eq in (acoustic, vti, tti):
        res = operational_intensity(eq, k)
        cells.append(f"{res.kernel_flops:5d} fl {float(res.oi):7.3f} oi")
    print(f"  {k:2d}  " + "  ".join(cells))

# The acoustic kernel moves 4 values per point (squared slowness, two time
# levels in, one out) -> 16 bytes in single precision.  Anisotropy adds
# wavefields and parameters: VTI moves 9 values, TTI 15.
print("\ntraffic per grid point (single precision):")
for eq in (acoustic, vti, tti):
    print(f"  {eq.name:8s} {eq.fields_moved:2d} values = {bytes_per_point(eq):3d} bytes")

# Double precision doubles the traffic and halves the OI, nothing else:
k = 25
print(f"\nacoustic OI at k={k}: "
      f"{float(operational_intensity(acoustic, k, 4).oi)} (float32) vs "
      f"{float(operational_intensity(acoustic, k, 8).oi)} (float64)")

# The elastic kernel has a fixed 441-FLOP update; only its traffic model is
# debatable, so it ships as three catalog entries.
print("\nelastic kernel, one update = 441 FLOPs:")
for name in ("elastic-stiff", "elastic-symmetric", "elastic-const"):
    eq = BUILTIN_EQUATIONS[name]
    res = operational_intensity(eq, 9)
    print(f"  {name:18s} {res.bytes_per_point:3d} B/point -> OI {float(res.oi):7.4f}")

# If you prefer reasoning in loads/stores: a store costs double unless the
# machine supports streaming stores that skip the read-for-ownership.
print("\nload/store traffic model, 3 loads + 1 store:")
print(f"  regular stores:   {traffic_model(3, 1)} bytes")
print(f"  streaming stores: {traffic_model(3, 1, streaming_stores=True)} bytes")
