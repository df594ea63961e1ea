"""Box-maximal averages over axis-aligned boxes of grid cells.

``fbar(t) = sup |int_Q f| / |Q|`` over boxes ``Q`` whose side on axis j is
at least ``t_j``.  The supremum runs over grid-aligned index boxes; a
threshold ``t_j`` is rounded up to a whole number of cells (at least one).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .gridfn import POSITIVE_ORTHANT, GridFunction, GridSpec
from .rearrange import DyadicProfile, dyadic_samples

EXHAUSTIVE_BUDGET = 2.5e7


@dataclass(frozen=True)
class SummedAreaTable:
    spec: GridSpec
    table: np.ndarray

    @property
    def shape(self) -> tuple:
        return self.spec.count


def summed_area_table(f: GridFunction) -> SummedAreaTable:
    """Cumulative sums of ``value * cellvol`` with a zero layer in front."""
    t = np.asarray(f.values) * f.cell_volume
    for j in range(f.dim):
        t = np.cumsum(t, axis=j)
    t = np.pad(t, [(1, 0)] * f.dim)
    return SummedAreaTable(f.spec, t)


def box_integral(T: SummedAreaTable, lo, hi):
    """Integral over the cells ``lo[j] <= i_j < hi[j]`` by inclusion-exclusion."""
    n = len(T.shape)
    lo, hi = tuple(int(x) for x in lo), tuple(int(x) for x in hi)
    if len(lo) != n or len(hi) != n:
        raise ValueError("box dimension mismatch")
    for a, b, N in zip(lo, hi, T.shape):
        if not (0 <= a <= b <= N):
            raise ValueError(f"box [{a}, {b}) outside grid of {N} cells")
    if any(a == b for a, b in zip(lo, hi)):
        return 0.0
    total = 0.0
    for corner in itertools.product((0, 1), repeat=n):
        idx = tuple(hi[j] if c else lo[j] for j, c in enumerate(corner))
        sign = (-1) ** (n - sum(corner))
        total += sign * T.table[idx]
    return total


def _box_volume(cells, spec: GridSpec) -> float:
    return math.prod(cells) * math.prod(spec.spacing)


def _all_box_sums(T: SummedAreaTable, sizes, stride=None) -> np.ndarray:
    """Integrals of every box of the given cell sizes (optionally strided)."""
    n = len(sizes)
    stride = stride or (1,) * n
    out = 0
    for corner in itertools.product((0, 1), repeat=n):
        sl = []
        for j, c in enumerate(corner):
            N, L, s = T.shape[j], sizes[j], stride[j]
            sl.append(slice(L, N + 1, s) if c else slice(0, N + 1 - L, s))
        sign = (-1) ** (n - sum(corner))
        out = out + sign * T.table[tuple(sl)]
    return out


def threshold_cells(t, spec: GridSpec) -> tuple:
    """Thresholds in length units -> minimal side lengths in cells."""
    t = np.broadcast_to(np.asarray(t, dtype=float), (spec.dim,))
    if np.any(t < 0) or np.any(~np.isfinite(t)):
        raise ValueError("thresholds must be finite and non-negative")
    cells = tuple(max(1, math.ceil(tj / h)) for tj, h in zip(t, spec.spacing))
    for c, N in zip(cells, spec.count):
        if c > N:
            raise ValueError("no admissible box: threshold exceeds grid extent")
    return cells


def _dyadic_sizes(N: int) -> list:
    return [1 << e for e in range(N.bit_length()) if (1 << e) <= N]


def choose_mode(spec: GridSpec) -> str:
    work = math.prod(N * (N + 1) / 2 for N in spec.count)
    return "exhaustive" if work <= EXHAUSTIVE_BUDGET else "dyadic"


def size_maxima(f: GridFunction, mode: str = "auto") -> np.ndarray:
    """``A[L_1-1, ..., L_n-1]`` = max |average| over boxes of exactly those sizes.

    In ``dyadic`` mode only power-of-two sizes are visited, at positions on
    a lattice of half the box size; other entries stay 0.
    """
    if mode == "auto":
        mode = choose_mode(f.spec)
    if mode not in ("exhaustive", "dyadic"):
        raise ValueError(f"unknown mode {mode!r}")
    T = summed_area_table(f)
    A = np.zeros(f.spec.count)
    if mode == "exhaustive":
        ranges = [range(1, N + 1) for N in f.spec.count]
    else:
        ranges = [_dyadic_sizes(N) for N in f.spec.count]
    for sizes in itertools.product(*ranges):
        stride = None if mode == "exhaustive" else tuple(max(1, L // 2) for L in sizes)
        sums = _all_box_sums(T, sizes, stride)
        A[tuple(L - 1 for L in sizes)] = np.abs(sums).max() / _box_volume(sizes, f.spec)
    return A


def maximal_grid(f: GridFunction, mode: str = "auto") -> GridFunction:
    """The whole function ``t -> fbar(t)`` as a positive-orthant grid.

    Cell ``(c_1-1, ..., c_n-1)`` holds the value for thresholds needing
    ``c_j`` cells, i.e. ``t_j`` in ``((c_j-1) h_j, c_j h_j]``.
    """
    if mode == "auto":
        mode = choose_mode(f.spec)
    G = size_maxima(f, mode)
    for j in range(f.dim):
        G = np.flip(np.maximum.accumulate(np.flip(G, axis=j), axis=j), axis=j)
    spec = GridSpec((0.0,) * f.dim, f.spec.spacing, f.spec.count)
    return GridFunction(spec, G, POSITIVE_ORTHANT, {"maximal_mode": mode})


def box_maximal_average(f: GridFunction, t) -> float:
    """``fbar(t)`` over all grid-aligned boxes with sides ``>= t``."""
    cells = threshold_cells(t, f.spec)
    T = summed_area_table(f)
    best = 0.0
    for sizes in itertools.product(*[range(c, N + 1) for c, N in zip(cells, f.spec.count)]):
        sums = _all_box_sums(T, sizes)
        best = max(best, float(np.abs(sums).max() / _box_volume(sizes, f.spec)))
    return best


def box_maximal_average_bruteforce(f: GridFunction, t) -> float:
    """Exhaustive oracle: sums every admissible box directly, no prefix sums."""
    cells = threshold_cells(t, f.spec)
    vals = np.asarray(f.values) * f.cell_volume
    per_axis = []
    for c, N in zip(cells, f.spec.count):
        per_axis.append([(a, b) for a in range(N) for b in range(a + c, N + 1)])
    best = 0.0
    for box in itertools.product(*per_axis):
        sl = tuple(slice(a, b) for a, b in box)
        sizes = tuple(b - a for a, b in box)
        best = max(best, float(abs(vals[sl].sum()) / _box_volume(sizes, f.spec)))
    return best


def dyadic_maximal_profile(f: GridFunction, window=None, mode: str = "auto") -> DyadicProfile:
    """``fbar(2**m)`` for ``m`` in the window."""
    return dyadic_samples(maximal_grid(f, mode), window)
