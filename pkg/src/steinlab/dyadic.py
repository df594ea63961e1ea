"""Dyadic index geometry: diagonals D_k, shells Lambda_r, stepped crosses G_k.

Sums over the full lattice ``m in Z^n`` are handled by :class:`LevelSums`.
For grid data every axis splits into *resolved* exponents (dyadic pieces
made of whole cells) and *fine* exponents (pieces inside the first cell,
where the data is constant).  Summing over the fine exponents only counts
lattice points, so every level sum ``L(k)`` is a finite expression and the
infinite tail ``k -> -inf`` is known in closed form (a polynomial in ``k``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .gridfn import POSITIVE_ORTHANT, GridFunction, dyadic_exponent
from .rearrange import cell_index, normalize_window


def diag_set(k: int, window) -> list:
    """All ``m`` in ``window`` with ``sum(m) == k``, lexicographic order."""
    lo, hi = window
    n = len(lo)
    if n == 1:
        return [(k,)] if lo[0] <= k <= hi[0] else []
    out = []
    for head in itertools.product(*[range(lo[j], hi[j] + 1) for j in range(n - 1)]):
        last = k - sum(head)
        if lo[-1] <= last <= hi[-1]:
            out.append(head + (last,))
    return out


def lambda_measure(r: int, window) -> float:
    """Measure of the shell ``Lambda_r`` restricted to the window's cells."""
    return len(diag_set(r, window)) * 2.0**r


@dataclass(frozen=True)
class RegionDescriptor:
    kind: str  # "lambda_block" or "cross"
    level: int
    cells: tuple

    @property
    def measure(self) -> float:
        return float(sum(2.0 ** sum(m) for m in self.cells))

    def contains(self, t) -> bool:
        t = np.asarray(t, dtype=float)
        m = np.floor(np.log2(t)).astype(int)
        return tuple(m.tolist()) in set(self.cells)


def lambda_block(r: int, window) -> RegionDescriptor:
    return RegionDescriptor("lambda_block", r, tuple(diag_set(r, window)))


def cross(k: int, window) -> RegionDescriptor:
    lo, hi = window
    r_min = sum(lo)
    cells = []
    for r in range(r_min, k + 1):
        cells.extend(diag_set(r, window))
    return RegionDescriptor("cross", k, tuple(cells))


def _binom_count(u: np.ndarray, d: int) -> np.ndarray:
    """Number of ``d+1`` non-negative integers summing to ``u`` (0 if u<0)."""
    out = np.ones_like(u, dtype=float)
    for i in range(1, d + 1):
        out *= (u + i) / i
    return np.where(u >= 0, out, 0.0)


class LevelSums:
    """``L(k) = sum_{m in D_k} w(m)`` for every integer ``k``.

    Built from parts ``(S, sigma_min, H)``: ``S`` is the set of axes sitting
    in their fine range and ``H[sigma - sigma_min]`` aggregates the weight of
    resolved coordinates with coordinate sum ``sigma``.  A part with fine
    axes ``S`` contributes ``H[sigma] * #{fine m_S : sum = k - sigma}``.
    """

    def __init__(self, parts, fine_top):
        self.parts = [(tuple(S), int(s0), np.asarray(H, dtype=float)) for S, s0, H in parts]
        self.fine_top = tuple(int(x) for x in fine_top)
        tops, onsets = [], []
        for S, s0, H in self.parts:
            nz = np.flatnonzero(H)
            if nz.size == 0:
                continue
            tS = sum(self.fine_top[j] for j in S)
            tops.append(tS + s0 + nz[-1])
            # below this level every part is in its polynomial regime
            onsets.append(tS + s0 + nz[0] if S else s0 + nz[0])
        self.k_max = max(tops) if tops else None
        self.k_poly = min(onsets) if onsets else None
        self.has_tail = any(S and np.any(H) for S, _, H in self.parts)

    @property
    def is_zero(self) -> bool:
        return self.k_max is None

    def __call__(self, k):
        k = np.asarray(k, dtype=np.int64)
        out = np.zeros(k.shape, dtype=float)
        for S, s0, H in self.parts:
            if not S:
                idx = k - s0
                ok = (idx >= 0) & (idx < H.size)
                out[ok] += H[idx[ok]]
                continue
            tS = sum(self.fine_top[j] for j in S)
            sig = s0 + np.arange(H.size)
            u = tS - k[..., None] + sig
            out += _binom_count(u, len(S) - 1) @ H
        return out

    @classmethod
    def from_tensor(cls, A, resolved, fine_rows, m_first, scales, fine_top):
        """Aggregate a cell tensor ``A`` through per-axis selection matrices.

        ``resolved[j]`` maps cells to resolved exponents ``m_first[j], ...``
        (shape ``R_j x N_j``), ``fine_rows[j]`` is the row used for fine
        exponents and ``scales[j]`` weights each resolved exponent.
        """
        n = A.ndim
        parts = []
        for S in itertools.chain.from_iterable(
            itertools.combinations(range(n), size) for size in range(n + 1)
        ):
            if any(resolved[j].shape[0] == 0 for j in range(n) if j not in S):
                continue
            B = A
            for j in range(n):
                mat = fine_rows[j][None, :] if j in S else resolved[j] * scales[j][:, None]
                B = np.moveaxis(np.tensordot(mat, B, axes=([1], [j])), 0, j)
            B = B.reshape([B.shape[j] for j in range(n) if j not in S]) if len(S) < n else B.reshape(())
            free = [j for j in range(n) if j not in S]
            if free:
                ms = np.meshgrid(*[m_first[j] + np.arange(resolved[j].shape[0]) for j in free],
                                 indexing="ij")
                sig = sum(ms).reshape(-1)
                s0 = int(sig.min())
                H = np.bincount(sig - s0, weights=B.reshape(-1))
            else:
                s0, H = 0, np.array([float(B)])
            parts.append((S, s0, H))
        return cls(parts, fine_top)


def _check_aligned(F: GridFunction):
    if F.domain_kind != POSITIVE_ORTHANT:
        raise ValueError("dyadic blocks are taken over a rearranged (positive-orthant) function")
    try:
        return [dyadic_exponent(h) for h in F.spec.spacing]
    except ValueError as exc:
        raise ValueError(f"grid is not dyadic-aligned: {exc}") from None


def block_levels(F: GridFunction, power: float = 2.0) -> LevelSums:
    """Normalized shell integrals ``L(r) = 2**-r int_{Lambda_r} |F|**power``.

    Requires power-of-two spacings so that the dyadic pieces
    ``[2**m, 2**(m+1))`` with ``m >= -s`` are unions of cells.
    """
    s = _check_aligned(F)
    A = np.abs(F.values) ** power
    resolved, fine_rows, m_first, scales, fine_top = [], [], [], [], []
    for j, (h, N) in enumerate(zip(F.spec.spacing, F.spec.count)):
        top = math.ceil(math.log2(N * h)) - 1
        ms = np.arange(-s[j], top + 1)
        W = np.zeros((ms.size, N))
        for row, m in enumerate(ms):
            a = int(2.0 ** (m + s[j]))
            W[row, a:min(2 * a, N)] = h
        resolved.append(W)
        row0 = np.zeros(N)
        row0[0] = 1.0
        fine_rows.append(row0)
        m_first.append(-s[j])
        scales.append(2.0 ** -ms.astype(float))
        fine_top.append(-s[j] - 1)
    return LevelSums.from_tensor(A, resolved, fine_rows, m_first, scales, fine_top)


def sample_levels(F: GridFunction, power: float = 2.0) -> LevelSums:
    """``L(k) = sum_{m in D_k} F(2**m)**power`` over the whole lattice."""
    if F.domain_kind != POSITIVE_ORTHANT:
        raise ValueError("dyadic samples are taken from a rearranged (positive-orthant) function")
    A = np.abs(F.values) ** power
    resolved, fine_rows, m_first, scales, fine_top = [], [], [], [], []
    for h, N in zip(F.spec.spacing, F.spec.count):
        ft = math.floor(math.log2(h))
        while 2.0 ** (ft + 1) <= h:
            ft += 1
        while 2.0**ft > h:
            ft -= 1
        top = math.floor(math.log2(N * h))
        while 2.0**top > N * h:
            top -= 1
        ms = np.arange(ft + 1, top + 1)
        P = np.zeros((ms.size, N))
        idx = cell_index(2.0 ** ms.astype(float), h, N)
        P[np.arange(ms.size), idx] = 1.0
        resolved.append(P)
        row0 = np.zeros(N)
        row0[0] = 1.0
        fine_rows.append(row0)
        m_first.append(ft + 1)
        scales.append(np.ones(ms.size))
        fine_top.append(ft)
    return LevelSums.from_tensor(A, resolved, fine_rows, m_first, scales, fine_top)


def block_integral(F: GridFunction, r: int, exponent: float = 2.0) -> float:
    """Exact ``int_{Lambda_r} |F(t)|**exponent dt``."""
    return float(2.0**r * block_levels(F, exponent)(np.array([r]))[0])


def series(levels: LevelSums, alpha: float, q: float, inner: float = 1.0,
           chunk: int = 2048, max_levels: int = 10**7) -> float:
    """``(sum_k (2**(alpha k) * L(k)**(1/inner))**q)**(1/q)`` over all k in Z.

    ``q = inf`` gives the supremum.  The lower tail is summed until it is
    below double precision; ``alpha <= 0`` with a nonzero tail diverges.
    """
    if levels.is_zero:
        return 0.0
    if alpha <= 0 and levels.has_tail:
        return math.inf
    k_hi = levels.k_max
    k_poly = levels.k_poly
    total = 0.0
    best = 0.0
    done = 0
    while True:
        ks = np.arange(k_hi, k_hi - chunk, -1)
        L = levels(ks)
        with np.errstate(divide="ignore"):
            logt = alpha * ks + np.log2(L) / inner
        if math.isinf(q):
            best = max(best, float(np.exp2(logt.max())))
            part = best if L.any() else 0.0
            small = (not levels.has_tail) or np.exp2(logt.max()) < 1e-18 * best
        else:
            terms = np.exp2(q * logt)
            part = float(terms.sum())
            total += part
            small = part <= 1e-18 * total and terms[-1] <= terms[0]
        done += chunk
        if ks[-1] < k_poly and (small or not levels.has_tail):
            break
        if done > max_levels:
            raise RuntimeError("level series did not converge")
        k_hi -= chunk
    if math.isinf(q):
        return best
    return total ** (1.0 / q)


def cross_integral(F: GridFunction, k: int, exponent: float = 2.0) -> float:
    """Exact ``int_{G_k} |F|**exponent`` over the stepped hyperbolic cross."""
    lv = block_levels(F, exponent)
    if lv.is_zero:
        return 0.0
    total = 0.0
    hi = min(k, lv.k_max)
    while True:
        ks = np.arange(hi, hi - 512, -1)
        terms = np.exp2(ks.astype(float)) * lv(ks)
        part = float(terms.sum())
        total += part
        if ks[-1] < lv.k_poly and (part <= 1e-18 * total or not lv.has_tail):
            break
        hi -= 512
    return total


def default_window(F: GridFunction, depth: int = 2):
    """Integer window covering the grid plus ``depth`` octaves below a cell."""
    lo, hi = [], []
    for h, N in zip(F.spec.spacing, F.spec.count):
        lo.append(math.floor(math.log2(h)) - depth)
        hi.append(math.ceil(math.log2(N * h)))
    return normalize_window((tuple(lo), tuple(hi)), F.dim)
