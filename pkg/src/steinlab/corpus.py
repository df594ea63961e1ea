"""Seeded test-function generators and the versioned corpus file format."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .gridfn import FULL_LINE, GridFunction, GridSpec

SCHEMA_VERSION = 1
GENERATORS = (
    "gaussian",
    "box_indicator",
    "hyperbolic_cross_indicator",
    "tensor_product",
    "random_step",
    "trig_poly",
    "zero",
)
ALIASES = {
    "gauss": "gaussian",
    "box": "box_indicator",
    "cross": "hyperbolic_cross_indicator",
    "tensor": "tensor_product",
    "random": "random_step",
    "trig": "trig_poly",
}


@dataclass(frozen=True)
class CorpusSpec:
    """One corpus entry.

    ``grid`` keys: ``n``, ``count`` (int or list), ``spacing`` (int or list,
    powers of two recommended), ``origin`` (``"centered"``, ``"zero"`` or a
    list).  Missing keys take generator-specific defaults.
    """

    generator: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    grid: dict = field(default_factory=dict)

    def __post_init__(self):
        gen = ALIASES.get(self.generator, self.generator)
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        object.__setattr__(self, "generator", gen)
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "CorpusSpec":
        unknown = set(obj) - {"generator", "params", "seed", "grid"}
        if unknown:
            raise ValueError(f"unknown corpus keys {sorted(unknown)}")
        return cls(obj["generator"], dict(obj.get("params", {})), int(obj.get("seed", 0)),
                   dict(obj.get("grid", {})))

    @property
    def label(self) -> str:
        return f"{self.generator}#{self.seed}"


def _grid_from_request(req: dict, default_n=1, default_count=64, default_spacing=0.25,
                       default_origin="centered") -> GridSpec:
    n = int(req.get("n", default_n))
    count = req.get("count", default_count)
    spacing = req.get("spacing", default_spacing)
    count = (int(count),) * n if np.ndim(count) == 0 else tuple(int(c) for c in count)
    spacing = (float(spacing),) * n if np.ndim(spacing) == 0 else tuple(float(h) for h in spacing)
    for v in list(count) + list(spacing):
        if not math.isfinite(v) or v <= 0:
            raise ValueError("grid count/spacing must be positive and finite")
    origin = req.get("origin", default_origin)
    if origin == "centered":
        return GridSpec.centered(count, spacing)
    if origin == "zero":
        return GridSpec.make(count, spacing, 0.0)
    return GridSpec.make(count, spacing, origin)


def _mesh(spec: GridSpec):
    return np.meshgrid(*[spec.centers(j) for j in range(spec.dim)], indexing="ij", sparse=True)


def _cell_overlap(spec: GridSpec, j: int, a: float, b: float) -> np.ndarray:
    """Fraction of each axis-j cell inside ``[a, b]``."""
    e = spec.edges(j)
    return np.clip(np.minimum(e[1:], b) - np.maximum(e[:-1], a), 0, None) / spec.spacing[j]


def _profile_1d(kind: str, x: np.ndarray, p: dict, spec: GridSpec = None, j: int = 0):
    if kind == "gaussian":
        s = float(p.get("sigma", 1.0))
        return np.exp(-(x**2) / (2 * s * s))
    if kind == "box_indicator":
        a, b = p.get("interval", (-1.0, 1.0))
        return _cell_overlap(spec, j, float(a), float(b))
    raise ValueError(f"unsupported tensor factor {kind!r}")


def anchored_union_measure(corners) -> float:
    """Exact measure of a union of boxes ``[0, c_1] x ... x [0, c_n]``.

    Coordinates are compressed to the distinct corner values; a compressed
    cell belongs to the union iff its upper corner is dominated by a corner.
    """
    corners = np.asarray(corners, dtype=float)
    n = corners.shape[1]
    axes = [np.unique(np.r_[0.0, corners[:, j]]) for j in range(n)]
    total = 0.0
    for idx in itertools.product(*[range(1, len(a)) for a in axes]):
        upper = np.array([axes[j][i] for j, i in enumerate(idx)])
        if np.any(np.all(corners >= upper, axis=1)):
            total += math.prod(axes[j][i] - axes[j][i - 1] for j, i in enumerate(idx))
    return total


def cross_corners(r: int, n: int) -> np.ndarray:
    """Corners ``2**m`` for ``m >= 0`` with ``sum(m) == r``."""
    ms = [m for m in itertools.product(range(r + 1), repeat=n) if sum(m) == r]
    return 2.0 ** np.array(ms, dtype=float)


def cross_indicator_at(points, r: int, n: int) -> np.ndarray:
    """Membership of points in the staircase ``G_r^*`` (closed boxes)."""
    pts = np.asarray(points, dtype=float).reshape(-1, n)
    C = cross_corners(r, n)
    inside = np.all((pts[:, None, :] >= 0) & (pts[:, None, :] <= C[None, :, :]), axis=2)
    return inside.any(axis=1).astype(float)


def generate(spec: CorpusSpec) -> GridFunction:
    """Deterministic grid function for a corpus entry."""
    gen, p = spec.generator, spec.params
    rng = np.random.default_rng(spec.seed)
    meta = {"generator": gen, "seed": spec.seed, "params": dict(p)}

    if gen == "hyperbolic_cross_indicator":
        r, n = int(p.get("r", 2)), int(spec.grid.get("n", p.get("n", 2)))
        if r < 0:
            raise ValueError("cross order r must be >= 0")
        grid = _grid_from_request(dict(spec.grid, n=n), default_count=2**r,
                                  default_spacing=1.0, default_origin="zero")
        if any(o != 0 for o in grid.origin):
            raise ValueError("the staircase lives on the positive orthant; use origin 'zero'")
        vals = np.zeros(grid.count)
        for c in cross_corners(r, n):
            cells = tuple(slice(0, min(N, int(math.ceil(cj / h))))
                          for cj, h, N in zip(c, grid.spacing, grid.count))
            vals[cells] = 1.0
        meta["support_measure"] = anchored_union_measure(cross_corners(r, n))
        return GridFunction(grid, vals, FULL_LINE, meta)

    grid = _grid_from_request(spec.grid)
    X = _mesh(grid)
    if gen == "zero":
        vals = np.zeros(grid.count)
    elif gen == "gaussian":
        sigma = p.get("sigma", 1.0)
        sig = (float(sigma),) * grid.dim if np.ndim(sigma) == 0 else tuple(map(float, sigma))
        if any(s <= 0 for s in sig):
            raise ValueError("sigma must be positive")
        vals = np.exp(-sum(x**2 / (2 * s * s) for x, s in zip(X, sig)))
    elif gen == "box_indicator":
        sides = p.get("sides", 2.0)
        sides = (float(sides),) * grid.dim if np.ndim(sides) == 0 else tuple(map(float, sides))
        center = p.get("center", 0.0)
        center = (float(center),) * grid.dim if np.ndim(center) == 0 else tuple(map(float, center))
        if any(s <= 0 for s in sides):
            raise ValueError("box sides must be positive")
        vals = np.ones(())
        for j in range(grid.dim):
            w = _cell_overlap(grid, j, center[j] - sides[j] / 2, center[j] + sides[j] / 2)
            shape = [1] * grid.dim
            shape[j] = -1
            vals = vals * w.reshape(shape)
        vals = np.broadcast_to(vals, grid.count)
    elif gen == "tensor_product":
        factors = p.get("factors", [{"kind": "gaussian"}] * grid.dim)
        if len(factors) != grid.dim:
            raise ValueError("one factor per axis required")
        vals = np.ones(())
        for j, fac in enumerate(factors):
            prof = _profile_1d(fac.get("kind", "gaussian"), grid.centers(j), fac, grid, j)
            shape = [1] * grid.dim
            shape[j] = -1
            vals = vals * prof.reshape(shape)
        vals = np.broadcast_to(vals, grid.count)
    elif gen == "random_step":
        block = int(p.get("block", 4))
        density = float(p.get("density", 0.6))
        if block < 1 or not (0 < density <= 1):
            raise ValueError("random_step needs block >= 1 and 0 < density <= 1")
        coarse = tuple(math.ceil(N / block) for N in grid.count)
        logv = rng.uniform(-10.0, 10.0, size=coarse)
        mask = rng.random(coarse) < density
        v = np.where(mask, 2.0**logv, 0.0)
        for j in range(grid.dim):
            v = np.repeat(v, block, axis=j)
        vals = v[tuple(slice(0, N) for N in grid.count)]
    elif gen == "trig_poly":
        degree = int(p.get("degree", 4))
        envelope = float(p.get("envelope", 2.0))
        if degree < 0 or envelope <= 0:
            raise ValueError("trig_poly needs degree >= 0 and envelope > 0")
        vals = np.zeros(grid.count)
        for freq in itertools.product(range(degree + 1), repeat=grid.dim):
            c, phase = rng.normal(), rng.uniform(0, 2 * np.pi)
            vals = vals + c * np.cos(sum(k * x for k, x in zip(freq, X)) + phase)
        vals = vals * np.exp(-sum(x**2 for x in X) / (2 * envelope**2))
    else:  # pragma: no cover - guarded by CorpusSpec
        raise ValueError(gen)
    return GridFunction(grid, np.array(vals, dtype=float), FULL_LINE, meta)


def load_corpus(path) -> list:
    """Read a corpus file: ``{"schema_version": 1, "entries": [...]}`` or a bare list."""
    with open(path) as fh:
        doc = json.load(fh, parse_constant=_reject_constant)
    return parse_corpus(doc)


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} in corpus")


def parse_corpus(doc) -> list:
    if isinstance(doc, dict):
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported corpus schema version {version!r}")
        doc = doc.get("entries")
    if not isinstance(doc, list):
        raise ValueError("corpus must be a list of entries")
    return [CorpusSpec.from_json(e) for e in doc]


def dump_corpus(specs, path=None) -> str:
    text = json.dumps({"schema_version": SCHEMA_VERSION,
                       "entries": [s.to_json() for s in specs]}, indent=1, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
