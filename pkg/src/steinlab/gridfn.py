"""Sampled functions on uniform grids and exact non-increasing step functions.

A :class:`GridFunction` is piecewise constant: on a ``full_line`` grid the
value ``values[i]`` lives on the cell ``[origin + i*h, origin + (i+1)*h)``
and is located at the cell centre when the function is treated as a point
sample (Fourier sums).  On a ``positive_orthant`` grid the origin is 0 and
cell ``i`` is ``(i*h, (i+1)*h]``, the convention used for rearrangements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

FULL_LINE = "full_line"
POSITIVE_ORTHANT = "positive_orthant"
_DOMAINS = (FULL_LINE, POSITIVE_ORTHANT)


def _as_tuple(x, n, cast):
    if np.ndim(x) == 0:
        return (cast(x),) * n
    out = tuple(cast(v) for v in x)
    if len(out) != n:
        raise ValueError(f"expected {n} per-axis entries, got {len(out)}")
    return out


@dataclass(frozen=True)
class GridSpec:
    origin: tuple
    spacing: tuple
    count: tuple

    def __post_init__(self):
        n = len(self.count)
        if n < 1:
            raise ValueError("grid needs at least one axis")
        object.__setattr__(self, "origin", _as_tuple(self.origin, n, float))
        object.__setattr__(self, "spacing", _as_tuple(self.spacing, n, float))
        object.__setattr__(self, "count", _as_tuple(self.count, n, int))
        for h in self.spacing:
            if not (h > 0 and math.isfinite(h)):
                raise ValueError(f"spacing must be positive and finite, got {h}")
        for c in self.count:
            if c < 1:
                raise ValueError(f"count must be >= 1, got {c}")
        for o in self.origin:
            if not math.isfinite(o):
                raise ValueError("origin must be finite")

    @classmethod
    def make(cls, count, spacing=1.0, origin=0.0):
        """Build a spec, broadcasting scalar spacing/origin over all axes."""
        count = (int(count),) if np.ndim(count) == 0 else tuple(int(c) for c in count)
        n = len(count)
        return cls(_as_tuple(origin, n, float), _as_tuple(spacing, n, float), count)

    @classmethod
    def centered(cls, count, spacing):
        """Symmetric box ``[-N h / 2, N h / 2)`` on every axis."""
        count = (int(count),) if np.ndim(count) == 0 else tuple(int(c) for c in count)
        spacing = _as_tuple(spacing, len(count), float)
        origin = tuple(-c * h / 2 for c, h in zip(count, spacing))
        return cls(origin, spacing, count)

    @property
    def dim(self) -> int:
        return len(self.count)

    @property
    def shape(self) -> tuple:
        return self.count

    @property
    def extent(self) -> tuple:
        return tuple(c * h for c, h in zip(self.count, self.spacing))

    def centers(self, axis: int) -> np.ndarray:
        h = self.spacing[axis]
        return self.origin[axis] + (np.arange(self.count[axis]) + 0.5) * h

    def edges(self, axis: int) -> np.ndarray:
        return self.origin[axis] + np.arange(self.count[axis] + 1) * self.spacing[axis]

    def scaled(self, factor) -> "GridSpec":
        """Spec with every coordinate multiplied by ``factor``."""
        f = _as_tuple(factor, self.dim, float)
        return GridSpec(
            tuple(o * s for o, s in zip(self.origin, f)),
            tuple(h * s for h, s in zip(self.spacing, f)),
            self.count,
        )


def cell_volume(spec: GridSpec) -> float:
    return float(math.prod(spec.spacing))


@dataclass(frozen=True)
class GridFunction:
    spec: GridSpec
    values: np.ndarray
    domain_kind: str = FULL_LINE
    meta: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.domain_kind not in _DOMAINS:
            raise ValueError(f"unknown domain_kind {self.domain_kind!r}")
        vals = np.asarray(self.values)
        if vals.dtype.kind not in "biufc":
            raise TypeError("grid values must be numeric")
        if vals.dtype.kind in "biu":
            vals = vals.astype(float)
        if vals.size != math.prod(self.spec.count):
            raise ValueError(
                f"{vals.size} values for a grid of {math.prod(self.spec.count)} cells"
            )
        vals = vals.reshape(self.spec.count)
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid values must be finite (no NaN/Inf)")
        if self.domain_kind == POSITIVE_ORTHANT and any(self.spec.origin):
            raise ValueError("positive_orthant grids have origin 0")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def cell_volume(self) -> float:
        return cell_volume(self.spec)

    @property
    def is_complex(self) -> bool:
        return self.values.dtype.kind == "c"

    def with_values(self, values, domain_kind=None) -> "GridFunction":
        return GridFunction(self.spec, values, domain_kind or self.domain_kind, self.meta)

    def lp_norm(self, p: float) -> float:
        """Plain ``(sum |f|^p cellvol)^(1/p)``; ``p=inf`` gives max |f|."""
        a = np.abs(self.values)
        if math.isinf(p):
            return float(a.max())
        return float((np.sum(a**p) * self.cell_volume) ** (1.0 / p))

    def scale(self, alpha) -> "GridFunction":
        return self.with_values(alpha * self.values)

    def dilate(self, j: int) -> "GridFunction":
        """``x -> f(2**j x)``: same samples on a grid shrunk by ``2**j``."""
        return GridFunction(self.spec.scaled(2.0**-j), self.values, self.domain_kind, self.meta)


def is_dyadic(h: float) -> bool:
    m, _ = math.frexp(h)
    return m == 0.5


def dyadic_exponent(h: float) -> int:
    """``s`` with ``h == 2**-s``; raises for non power-of-two spacing."""
    if not is_dyadic(h):
        raise ValueError(f"spacing {h!r} is not a power of two")
    return 1 - math.frexp(h)[1]


@dataclass(frozen=True)
class StepFunction:
    """Non-increasing step function on ``(0, inf)``.

    Piece ``i`` has value ``values[i]`` on ``(T[i-1], T[i]]`` where ``T`` is
    the cumulative sum of ``widths``; zero on the tail.  Constructing through
    :meth:`from_pieces` canonicalizes (zero pieces dropped, sorted by value,
    equal neighbours merged).
    """

    widths: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.widths, dtype=float).reshape(-1).copy()
        v = np.asarray(self.values, dtype=float).reshape(-1).copy()
        if w.shape != v.shape:
            raise ValueError("widths and values differ in length")
        if np.any(~np.isfinite(w)) or np.any(~np.isfinite(v)):
            raise ValueError("step data must be finite")
        if np.any(w <= 0):
            raise ValueError("piece widths must be positive")
        if np.any(v < 0):
            raise ValueError("piece values must be non-negative")
        if np.any(np.diff(v) > 0):
            raise ValueError("piece values must be non-increasing")
        w.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "widths", w)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return np.array_equal(self.widths, other.widths) and np.array_equal(self.values, other.values)

    __hash__ = None

    @classmethod
    def from_pieces(cls, widths, values) -> "StepFunction":
        return canonicalize(np.asarray(widths, dtype=float), np.asarray(values, dtype=float))

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls(np.empty(0), np.empty(0))

    @property
    def pieces(self) -> list:
        return list(zip(self.widths.tolist(), self.values.tolist()))

    @property
    def breakpoints(self) -> np.ndarray:
        """Right ends ``T_i`` of the pieces."""
        return np.cumsum(self.widths)

    @property
    def total_measure(self) -> float:
        return float(self.widths.sum())

    def __call__(self, t):
        """Evaluate ``f*(t)`` with the right-continuous convention."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t, side="right")
        padded = np.append(self.values, 0.0)
        return padded[np.minimum(idx, len(self.values))]


def canonicalize(widths, values=None) -> StepFunction:
    """Canonical form of a list of ``(width, value)`` pieces.

    Accepts either a :class:`StepFunction` or two arrays.  Sorting is stable
    by decreasing value, so the result is deterministic.
    """
    if isinstance(widths, StepFunction):
        widths, values = widths.widths, widths.values
    w = np.asarray(widths, dtype=float).reshape(-1)
    v = np.asarray(values, dtype=float).reshape(-1)
    if w.shape != v.shape:
        raise ValueError("widths and values differ in length")
    if np.any(np.isnan(v)) or np.any(np.isnan(w)):
        raise ValueError("NaN in step data")
    if np.any(w < 0) or np.any(v < 0):
        raise ValueError("widths and values must be non-negative")
    keep = (w > 0) & (v > 0)
    w, v = w[keep], v[keep]
    order = np.argsort(-v, kind="stable")
    w, v = w[order], v[order]
    if v.size:
        starts = np.flatnonzero(np.r_[True, v[1:] != v[:-1]])
        w = np.add.reduceat(w, starts)
        v = v[starts]
    return StepFunction(w, v)


def step_integral(s: StepFunction, exponent: float = 1.0, lower: float = 0.0,
                  upper: float = math.inf) -> float:
    """Exact ``int_lower^upper f*(t)**exponent dt`` for a step function."""
    if lower < 0 or upper < 0:
        raise ValueError("integration bounds must be non-negative")
    if lower > upper:
        raise ValueError("lower bound exceeds upper bound")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    if s.values.size == 0 or lower == upper:
        return 0.0
    right = s.breakpoints
    left = right - s.widths
    overlap = np.clip(np.minimum(right, upper) - np.maximum(left, lower), 0.0, None)
    return float(np.sum(s.values**exponent * overlap))


@dataclass(frozen=True)
class LorentzParams:
    """Exponents ``(p, q)``, scalar or per axis, with ``p'`` where defined."""

    p: object
    q: object

    def __post_init__(self):
        p = tuple(float(x) for x in np.atleast_1d(self.p))
        q = tuple(float(x) for x in np.atleast_1d(self.q))
        if len(p) != len(q):
            if len(p) == 1:
                p = p * len(q)
            elif len(q) == 1:
                q = q * len(p)
            else:
                raise ValueError("p and q have different lengths")
        for pj, qj in zip(p, q):
            if not (pj > 0) or not (qj > 0):
                raise ValueError(f"exponents must be positive, got p={pj}, q={qj}")
            if math.isinf(pj) and not math.isinf(qj):
                raise ValueError("p = inf requires q = inf")
        object.__setattr__(self, "p", p if len(p) > 1 else p[0])
        object.__setattr__(self, "q", q if len(q) > 1 else q[0])

    @property
    def is_vector(self) -> bool:
        return isinstance(self.p, tuple)

    def per_axis(self, n: int) -> tuple:
        p = self.p if self.is_vector else (self.p,) * n
        q = self.q if isinstance(self.q, tuple) else (self.q,) * n
        if len(p) != n:
            raise ValueError(f"parameters are {len(p)}-dimensional, function is {n}-dimensional")
        return p, q

    @property
    def p_prime(self):
        return conjugate_exponent(self.p)


def conjugate_exponent(p):
    """``p' = p / (p - 1)``, defined for ``1 < p < inf`` (scalar or sequence)."""
    if isinstance(p, (tuple, list, np.ndarray)):
        return tuple(conjugate_exponent(x) for x in p)
    p = float(p)
    if not (1 < p < math.inf):
        raise ValueError(f"conjugate exponent needs 1 < p < inf, got {p}")
    return p / (p - 1.0)


def as_grid_function(values: Sequence, spacing=1.0, origin=0.0,
                     domain_kind=FULL_LINE) -> GridFunction:
    """Convenience wrapper: ndarray plus per-axis spacing -> GridFunction."""
    arr = np.asarray(values)
    spec = GridSpec.make(arr.shape, spacing, origin)
    return GridFunction(spec, arr, domain_kind)
