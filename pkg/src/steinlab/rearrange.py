"""Non-increasing rearrangements of grid data.

All rearrangements here are exact: a piecewise-constant function on a
uniform grid rearranges to a piecewise-constant function, so sorting cell
values (weighted by cell measure) is the whole computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gridfn import (
    POSITIVE_ORTHANT,
    GridFunction,
    GridSpec,
    StepFunction,
    canonicalize,
)


def rearrangement_1d(f, measures=None) -> StepFunction:
    """Rearrangement ``f*`` of |f| as a step function.

    ``f`` is either a GridFunction (any dimension; every cell weighs its
    volume) or an array of values, in which case ``measures`` gives the
    measure of each value (scalar or array).
    """
    if isinstance(f, GridFunction):
        vals = np.abs(f.values).reshape(-1)
        w = np.full(vals.shape, f.cell_volume)
    else:
        vals = np.asarray(f)
        if vals.dtype.kind not in "biufc":
            raise TypeError("values must be numeric")
        vals = np.abs(vals.reshape(-1)).astype(float)
        if measures is None:
            raise ValueError("explicit values need their measures")
        w = np.broadcast_to(np.asarray(measures, dtype=float), vals.shape)
    if np.any(np.isnan(vals)):
        raise ValueError("NaN values cannot be rearranged")
    if np.any(~np.isfinite(vals)) or np.any(~np.isfinite(w)):
        raise ValueError("rearrangement needs finite data")
    return canonicalize(w, vals)


def _sort_desc(a: np.ndarray, axis: int) -> np.ndarray:
    return np.flip(np.sort(a, axis=axis, kind="stable"), axis=axis)


def repeated_rearrangement(f: GridFunction) -> GridFunction:
    """Repeated rearrangement ``f^{*1...*n}``.

    Axis 0 slices are sorted first (descending |value|), then axis 1 slices
    of the result, and so on.  The output lives on the positive orthant with
    the same counts and spacings.
    """
    if np.any(np.isnan(f.values)):
        raise ValueError("NaN values cannot be rearranged")
    a = np.abs(f.values).astype(float)
    for axis in range(f.dim):
        a = _sort_desc(a, axis)
    spec = GridSpec((0.0,) * f.dim, f.spec.spacing, f.spec.count)
    return GridFunction(spec, a, POSITIVE_ORTHANT, f.meta)


def cell_index(t, spacing: float, count: int) -> np.ndarray:
    """Cell of the left-closed step extension at ``t > 0``.

    Cell ``i`` is ``(i h, (i+1) h]``; points at or below ``h`` read cell 0
    and indices ``>= count`` mean "beyond the grid" (value 0).
    """
    t = np.asarray(t, dtype=float)
    idx = np.ceil(t / spacing).astype(np.int64) - 1
    return np.clip(idx, 0, count)


def evaluate_orthant(F: GridFunction, points) -> np.ndarray:
    """Piecewise-constant extension of a positive-orthant grid at points.

    ``points`` is a sequence of per-axis coordinate arrays (broadcast
    together); values beyond the grid extent are 0.
    """
    if F.domain_kind != POSITIVE_ORTHANT:
        raise ValueError("evaluation needs a positive-orthant function")
    padded = np.pad(np.abs(F.values), [(0, 1)] * F.dim)
    idx = [cell_index(points[j], F.spec.spacing[j], F.spec.count[j]) for j in range(F.dim)]
    return padded[tuple(np.broadcast_arrays(*idx))]


@dataclass(frozen=True)
class DyadicProfile:
    """Values ``F(2**m)`` for ``m`` in a rectangular integer window.

    ``values[i_1, ..., i_n]`` belongs to ``m_j = lo[j] + i_j``.
    """

    lo: tuple
    hi: tuple
    values: np.ndarray

    def __post_init__(self):
        lo = tuple(int(x) for x in self.lo)
        hi = tuple(int(x) for x in self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("window bounds mismatch")
        if any(h < l for l, h in zip(lo, hi)):
            raise ValueError("empty window")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != tuple(h - l + 1 for l, h in zip(lo, hi)):
            raise ValueError("profile values do not match window")
        if np.any(~np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("profile values must be finite and non-negative")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __getitem__(self, m) -> float:
        m = (m,) if np.ndim(m) == 0 else tuple(m)
        return float(self.values[tuple(mj - lj for mj, lj in zip(m, self.lo))])

    def axis_values(self, j: int) -> np.ndarray:
        return np.arange(self.lo[j], self.hi[j] + 1)

    def level_index(self) -> np.ndarray:
        """Array of ``k = sum(m)`` aligned with ``values``."""
        grids = np.meshgrid(*[self.axis_values(j) for j in range(self.dim)], indexing="ij")
        return sum(grids)

    def is_monotone(self) -> bool:
        return all(np.all(np.diff(self.values, axis=j) <= 0) for j in range(self.dim))


def normalize_window(window, n: int):
    """Accept ``(lo, hi)`` scalars or per-axis sequences."""
    if window is None:
        raise ValueError("empty window")
    lo, hi = window
    lo = (int(lo),) * n if np.ndim(lo) == 0 else tuple(int(x) for x in lo)
    hi = (int(hi),) * n if np.ndim(hi) == 0 else tuple(int(x) for x in hi)
    if len(lo) != n or len(hi) != n:
        raise ValueError("window dimension mismatch")
    if any(h < l for l, h in zip(lo, hi)):
        raise ValueError("empty window")
    return lo, hi


def natural_window(F: GridFunction, depth: int = 2):
    """Window from ``depth`` octaves below the first cell to the grid extent."""
    lo, hi = [], []
    for h, c in zip(F.spec.spacing, F.spec.count):
        lo.append(math.floor(math.log2(h)) - depth)
        hi.append(math.floor(math.log2(c * h)))
    return tuple(lo), tuple(hi)


def dyadic_samples(F: GridFunction, window=None) -> DyadicProfile:
    """``F(2**m)`` for every ``m`` in ``window`` (default: natural window)."""
    if F.domain_kind != POSITIVE_ORTHANT:
        raise ValueError("dyadic samples are taken from a rearranged (positive-orthant) function")
    lo, hi = natural_window(F) if window is None else normalize_window(window, F.dim)
    axes = [2.0 ** np.arange(l, h + 1) for l, h in zip(lo, hi)]
    pts = np.meshgrid(*axes, indexing="ij", sparse=True)
    return DyadicProfile(lo, hi, evaluate_orthant(F, pts))
