#!/usr/bin/env python3
"""Where do the roofline numbers come from?

A machine is summarized by two achievable rates: memory bandwidth B and
floating-point throughput F.  Their ratio F/B is the ridge point: the
operational intensity an algorithm must exceed before the compute units,
rather than the memory bus, limit it.
"""

from fdroof import (
    ArchParams,
    BUILTIN_MACHINES,
    MemParams,
    attainable_performance,
    classify_boundedness,
    ridge_point,
    theoretical_peak_bandwidth,
    theoretical_peak_flops,
)

# Theoretical peaks follow from architectural parameters alone.  A dual
# socket 12-core chip at 2.7 GHz with 8-wide single-precision SIMD and
# fused multiply-add:
arch = ArchParams(simd_lanes_sp=8, fma_ops_per_cycle=2, cores=12, sockets=2,
                  clock_ghz=2.7)
print(f"theoretical compute peak: {theoretical_peak_flops(arch):.1f} GFLOPS")

# ... and on the memory side, 1866 MT/s DDR3 over 4 channels x 8 bytes,
# twice (one controller per socket):
mem = MemParams(transfer_rate_mts=1866, channels=4, bytes_per_channel=8, sockets=2)
print(f"theoretical bandwidth:    {theoretical_peak_bandwidth(mem):.1f} GB/s")

# Instruction overheads keep real kernels well below those numbers, so the
# registry stores measured achievable rates separately:
print("\nbuilt-in machines:")
for m in BUILTIN_MACHINES.values():
    print(f"  {m.name:18s} F_ach={m.peak_gflops_achievable:7.1f} GFLOPS  "
          f"B_ach={m.peak_bw_achievable:6.1f} GB/s  "
          f"ridge={ridge_point(m):5.2f} FLOPs/byte")

# The roofline says: at operational intensity I you can at best reach
# min(I * B, F).  Watch the Xeon transition from memory- to compute-bound:
xeon = BUILTIN_MACHINES["xeon-e5-2697v2-2s"]
print(f"\nattainable performance on {xeon.name}:")
for oi in (0.5, 1.375, 5.125, 9.3, 9.625, 20.0):
    gflops = attainable_performance(xeon, oi)
    print(f"  OI {oi:6.3f} -> {gflops:6.1f} GFLOPS ({classify_boundedness(xeon, oi)}-bound)")
