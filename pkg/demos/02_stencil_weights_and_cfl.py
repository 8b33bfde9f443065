#!/usr/bin/env python3
"""Finite-difference weights, their absolute sums, and the stable time step.

Raising the spatial order widens the stencil and grows the Laplacian weight
sum a2 -- which tightens the CFL bound dt <= h * sqrt(a1/a2) / v_max.  This
is the stability half of the cost-to-solution trade-off.
"""

import math

from fdroof import a2_sum, fd_weights, stencil_geometry

print("centred second-derivative weights (exact rationals):")
for order in (2, 4, 6):
    w = fd_weights(2, order)
    print(f"  order {order}: {[str(x) for x in w.weights]}")

# The canonical verification: weights applied to x^j reproduce the exact
# derivative for every monomial the accuracy order promises.
w = fd_weights(2, 6)
for j in (2, 7):
    applied = sum(wt * off ** j for wt, off in zip(w.weights, w.offsets))
    exact = 2 if j == 2 else 0
    print(f"  d2/dx2 x^{j} at 0: stencil gives {applied}, exact {exact}")

print("\n3D Laplacian weight sums a2 and stable dt (h=1, v=1, a1=4):")
print("  order   a2      dt_max")
for order in (2, 6, 12, 18, 24, 32):
    a2 = a2_sum(order)
    dt = math.sqrt(4.0 / a2)
    print(f"  {order:5d}   {a2:6.3f}  {dt:.4f}")

# The star stencil of a k-point-per-line Laplacian touches 3(k-1)+1 grid
# points; the rotated variant (cross derivatives) adds 3(k-1)^2 more.
print("\nstencil support:")
for k in (3, 9, 17):
    star = stencil_geometry("star", k)
    rot = stencil_geometry("rotated", k)
    print(f"  k={k:2d}: star {star.npoints:3d} points, rotated {rot.npoints:4d} points")

# Geometries export as plain point lists for external plotting:
print("\nstar k=3 point list:")
print(stencil_geometry("star", 3).point_list())
