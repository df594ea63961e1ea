#!/usr/bin/env python3
"""Diagonal l2 mass of the staircase indicator as r grows.

The staircase of order r is the union of boxes [0, 2^m1] x [0, 2^m2] with
m1 + m2 = r.  On the diagonal m1 + m2 = r every sample is 1, so the l2 mass
is sqrt(r + 1) and the log-log slope sits near 1/2.  Summing with exponent
p instead gives (r + 1)^(1/p).
"""
from steinlab.verify import sharpness_experiment

rep = sharpness_experiment(n=2, p=1.5, r_range=range(8, 25))
print(" r        B(r)   2^(r/p') B(r)   l^p mass")
for r, B, block, classical in rep.rows:
    print(f"{r:2d} {B:11.6f} {block:15.1f} {classical:10.4f}")
print(f"\nfitted slope of log B vs log r: {rep.slope:.3f}")
print(f"same for the l^p mass:          {rep.classical_slope:.3f}")

# in one dimension the diagonal is a single point
print("n=1 slope:", sharpness_experiment(n=1, p=1.5, r_range=range(8, 25)).slope)
