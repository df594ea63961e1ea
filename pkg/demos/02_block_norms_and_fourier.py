#!/usr/bin/env python3
# Lorentz norms, block quasinorms and a look at the Fourier side for a Gaussian.
import math

from steinlab import CorpusSpec, fourier_transform, generate, lorentz_norm, frak_norm
from steinlab import rearrangement_1d, repeated_rearrangement
from steinlab import verify as V

g = generate(CorpusSpec("gauss", {"sigma": [1.0, 0.5]}, 0, {"n": 2, "count": 32, "spacing": 0.5}))
print("grid:", g.spec)

p, q = 1.5, 2.0
print(f"||g||_L({p},{q})     = {lorentz_norm(rearrangement_1d(g), p, q):.6f}")
print(f"block quasinorm     = {frak_norm(repeated_rearrangement(g), p, q):.6f}")

gh = fourier_transform(g)
print("transform grid spacing:", gh.spec.spacing, " peak", abs(gh.values).max(), " expected", math.pi)

print("\nratios for a few checks, and how little they move under dilation:")
for name, check, kw in [
    ("block sums", V.check_block_stein, dict(p=1.5, q=1.5)),
    ("maximal", V.check_maximal_stein, dict(p=1.5, r=2.0, q=2.0)),
    ("anisotropic", V.check_anisotropic_stein, dict(p=(1.5, 1.8), q=(2.0, 2.0))),
]:
    for tid, ratios in V.dilation_ratios(check, g, range(-2, 3), **kw).items():
        print(f"  {name:12s} {tid:28s} " + " ".join(f"{r:9.5f}" for r in ratios))
