"""Lorentz-type quasinorms and functionals, all in closed form.

Every ``t``-integral is a power integral over a cell or a step piece, so no
quadrature is involved anywhere.  Infinite sums over dyadic levels are
evaluated through :mod:`steinlab.dyadic` with their lower tails included.
"""

from __future__ import annotations

import math

import numpy as np

from .dyadic import block_levels, sample_levels, series
from .gridfn import POSITIVE_ORTHANT, GridFunction, LorentzParams, StepFunction
from .rearrange import DyadicProfile, repeated_rearrangement


def _power_increments(edges: np.ndarray, e: float) -> np.ndarray:
    """``edges[i+1]**e - edges[i]**e`` for increasing edges >= 0, e > 0.

    Written as ``b**e * (1 - (1 - gap)**e)`` through ``log1p``/``expm1`` so
    narrow pieces far from the origin keep their relative accuracy.
    """
    a, b = edges[:-1], edges[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        # b - a is exact for neighbouring edges; a / b would round the gap away
        gap = np.where(b > 0, (b - a) / np.where(b > 0, b, 1.0), 1.0)
        frac = np.where(gap < 1.0, -np.expm1(e * np.log1p(-gap)), 1.0)
    return b**e * frac


def weighted_integral(values: np.ndarray, edges: np.ndarray, p: float, q: float,
                      axis: int = 0) -> np.ndarray:
    """``(int (t**(1/p) |g(t)|)**q dt/t)**(1/q)`` for piecewise-constant ``g``.

    ``values`` holds ``g`` on ``(edges[i], edges[i+1]]`` along ``axis``; the
    result drops that axis.  ``q = inf`` is the supremum (attained at right
    piece ends), ``p = inf`` means no power weight.
    """
    v = np.moveaxis(np.abs(np.asarray(values, dtype=float)), axis, -1)
    if math.isinf(q):
        w = np.ones(len(edges) - 1) if math.isinf(p) else edges[1:] ** (1.0 / p)
        return (v * w).max(axis=-1) if v.shape[-1] else np.zeros(v.shape[:-1])
    if math.isinf(p):
        raise ValueError("p = inf requires q = inf")
    incr = (p / q) * _power_increments(edges, q / p)
    return np.sum(v**q * incr, axis=-1) ** (1.0 / q)


def lorentz_norm(s: StepFunction, p: float, q: float) -> float:
    """``||f||_{L_{p,q}}`` from the rearrangement ``s = f*``."""
    LorentzParams(p, q)
    if s.values.size == 0:
        return 0.0
    edges = np.r_[0.0, s.breakpoints]
    return float(weighted_integral(s.values, edges, p, q))


def _check_orthant(F: GridFunction):
    if F.domain_kind != POSITIVE_ORTHANT:
        raise ValueError("expected a rearranged (positive-orthant) function")


def a_coefficients(F: GridFunction):
    """``a_k = (2**-k int_{Lambda_k} F**2)**(1/2)`` as a callable on k."""
    _check_orthant(F)
    lv = block_levels(F, 2.0)
    return lambda k: np.sqrt(lv(np.asarray(k)))


def a_coefficient(F: GridFunction, k: int) -> float:
    return float(a_coefficients(F)(np.array([k]))[0])


def frak_norm(F: GridFunction, p: float, q: float) -> float:
    """Hyperbolic-cross block quasinorm ``(sum_k (2**(k/p) a_k)**q)**(1/q)``.

    ``F`` is a repeated rearrangement on a dyadic grid.  The sum runs over
    all integers k; ``q = inf`` gives ``sup_k 2**(k/p) a_k``.
    """
    if not (p > 0 and q > 0):
        raise ValueError("p and q must be positive")
    _check_orthant(F)
    alpha = 0.0 if math.isinf(p) else 1.0 / p
    return series(block_levels(F, 2.0), alpha, q, inner=2.0)


def frak_norm_of(f: GridFunction, p: float, q: float) -> float:
    return frak_norm(repeated_rearrangement(f), p, q)


def dyadic_block_sum(profile: DyadicProfile, exponent: float, q: float,
                     inner: float = 2.0, levels: bool = False):
    """``sum_k 2**(k q/exponent) (sum_{m in D_k} v_m**inner)**(q/inner)`` on a window.

    ``exponent`` is the dyadic weight exponent (``p'`` on the Fourier side).
    ``q = inf`` gives the supremum over k.  With ``levels=True`` the per-level
    terms (before the outer q-sum) are returned as ``(ks, terms)``.
    """
    if not (exponent > 0 and q > 0 and inner > 0):
        raise ValueError("exponents must be positive")
    k = profile.level_index().reshape(-1)
    v = profile.values.reshape(-1) ** inner
    k0 = int(k.min())
    inner_sums = np.bincount(k - k0, weights=v)
    ks = k0 + np.arange(inner_sums.size)
    alpha = 0.0 if math.isinf(exponent) else 1.0 / exponent
    terms = 2.0 ** (alpha * ks) * inner_sums ** (1.0 / inner)
    if levels:
        return ks, terms
    if math.isinf(q):
        return float(terms.max()) if terms.size else 0.0
    return float(np.sum(terms**q))


def lattice_block_sum(F: GridFunction, exponent: float, q: float, inner: float = 2.0) -> float:
    """:func:`dyadic_block_sum` over the whole lattice ``m in Z^n``.

    Same q-th power convention: returns ``sum_k (...)**q`` (``sup`` for
    ``q = inf``), with the infinite tail below the grid included.
    """
    _check_orthant(F)
    alpha = 0.0 if math.isinf(exponent) else 1.0 / exponent
    val = series(sample_levels(F, inner), alpha, q, inner=inner)
    return val if math.isinf(q) else val**q


def _axis_params(p, q, n):
    lp = LorentzParams(p, q)
    pv, qv = lp.per_axis(n)
    for pj, qj in zip(pv, qv):
        if math.isfinite(qj) and not math.isfinite(pj):
            raise ValueError("q_j < inf requires p_j < inf")
    return pv, qv


def phi_functional(F: GridFunction, p, q) -> float:
    """Iterated weighted functional, innermost integral over axis 0.

    ``(int ... (int |t_1^{1/p_1}...t_n^{1/p_n} F|^{q_1} dt_1/t_1)^{q_2/q_1} ... dt_n/t_n)^{1/q_n}``
    evaluated exactly cell by cell; ``q_j = inf`` turns that integral into a
    supremum.
    """
    _check_orthant(F)
    pv, qv = _axis_params(p, q, F.dim)
    G = np.abs(F.values).astype(float)
    for j in range(F.dim):
        edges = np.arange(F.spec.count[j] + 1) * F.spec.spacing[j]
        G = weighted_integral(G, edges, pv[j], qv[j], axis=0)
    return float(G)


def anisotropic_lorentz_norm(f: GridFunction, p, q) -> float:
    """``Phi_{p,q}`` of the repeated rearrangement of ``f``."""
    return phi_functional(repeated_rearrangement(f), p, q)


def n_norm(fbar: GridFunction, p, q) -> float:
    """``Phi_{p,q}`` of a box-maximal function on the positive orthant.

    ``fbar`` must be non-increasing along every axis; a violation means the
    maximal function was computed incorrectly and is rejected.
    """
    _check_orthant(fbar)
    v = fbar.values
    for j in range(fbar.dim):
        if np.any(np.diff(v, axis=j) > 1e-12 * max(float(np.max(np.abs(v))), 1e-300)):
            raise ValueError("maximal profile is not non-increasing")
    return phi_functional(fbar, p, q)


def mixed_lorentz_norm(f: GridFunction, p, sigma) -> float:
    """Iterated one-axis Lorentz norms, innermost axis first.

    Each axis-0 slice is rearranged and measured in ``L_{p_1,sigma_1}``,
    leaving a function of the remaining axes; repeat.
    """
    pv, sv = _axis_params(p, sigma, f.dim)
    G = np.abs(f.values).astype(float)
    for j in range(f.dim):
        G = np.flip(np.sort(G, axis=0), axis=0)
        edges = np.arange(f.spec.count[j] + 1) * f.spec.spacing[j]
        G = weighted_integral(G, edges, pv[j], sv[j], axis=0)
    return float(G)
