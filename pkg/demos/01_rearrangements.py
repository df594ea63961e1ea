#!/usr/bin/env python3
# Rearranging a small random grid function, by hand and with the library.
import numpy as np

from steinlab import as_grid_function, rearrangement_1d, repeated_rearrangement
from steinlab.gridfn import step_integral

rng = np.random.default_rng(3)
vals = np.round(rng.normal(size=(4, 5)), 2)
f = as_grid_function(vals, 0.5, (-1.0, -1.25))
print("values (axis 0 down, axis 1 across):")
print(vals)

# f* forgets geometry entirely: a decreasing step function on (0, inf)
s = rearrangement_1d(f)
print("\nf* pieces (width, value), first five:", s.pieces[:5])
print("total measure of the support:", s.total_measure)

# the repeated version sorts axis 0 first, then axis 1
F = repeated_rearrangement(f)
print("\nrepeated rearrangement:")
print(F.values)

# both keep every L_p norm
for p in (1, 2, 3):
    direct = (np.sum(np.abs(vals) ** p) * f.cell_volume) ** (1 / p)
    print(f"p={p}:  direct {direct:.12f}   via f* {step_integral(s, p) ** (1 / p):.12f}   "
          f"via repeated {(np.sum(F.values ** p) * F.cell_volume) ** (1 / p):.12f}")
