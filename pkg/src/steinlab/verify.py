"""Inequality checks over grid functions.

Two kinds of report:

* ``exact`` - the inequality holds with constant 1 for grid data, so the
  check passes iff ``lhs <= rhs * (1 + eps)`` (or ``|lhs - rhs| <= eps``
  relative, for identities).
* ``ratio`` - the inequality carries an unknown constant; the report records
  ``lhs / rhs`` and the suite compares it against a committed baseline.

Degenerate ``0 / 0`` ratios are reported with status ``warn``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .corpus import SCHEMA_VERSION, CorpusSpec, cross_indicator_at, generate
from .dyadic import block_integral, block_levels, cross_integral, diag_set
from .fourier import fourier_transform
from .gridfn import GridFunction, conjugate_exponent, step_integral
from .maximal import maximal_grid
from .norms import (
    anisotropic_lorentz_norm,
    frak_norm,
    lattice_block_sum,
    lorentz_norm,
    mixed_lorentz_norm,
    n_norm,
    phi_functional,
)
from .rearrange import rearrangement_1d, repeated_rearrangement

EXACT_EPS = 1e-12
BASELINE_SLACK = 1.05
# Upper shell integrals are compared against the tail of f* from 2**(k-1).
SHELL_TAIL_OFFSET = 1


@dataclass(frozen=True)
class VerificationReport:
    test_id: str
    params: dict
    lhs: float
    rhs: float
    ratio: float
    mode: str
    status: str
    note: str = ""

    @property
    def key(self) -> str:
        """Baseline key: test id plus the exponents that define the check."""
        parts = [self.test_id]
        for name in ("p", "q", "r"):
            if self.params.get(name) is not None:
                parts.append(f"{name}={_fmt_param(self.params[name])}")
        return "|".join(parts)

    def row(self) -> dict:
        pr = self.params
        return {
            "test_id": self.test_id,
            "n": pr.get("n", ""),
            "p": _fmt_param(pr.get("p")),
            "q": _fmt_param(pr.get("q")),
            "r": _fmt_param(pr.get("r")),
            "seed": pr.get("seed", ""),
            "lhs": repr(float(self.lhs)),
            "rhs": repr(float(self.rhs)),
            "ratio": repr(float(self.ratio)),
            "mode": self.mode,
            "status": self.status,
            "tool_version": __version__,
            "schema_version": SCHEMA_VERSION,
        }


def _fmt_param(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(_fmt_param(x) for x in v) + ")"
    v = float(v)
    return "inf" if math.isinf(v) else repr(v)


def exact_report(test_id, lhs, rhs, params, eps=EXACT_EPS, identity=False, note=""):
    lhs, rhs = float(lhs), float(rhs)
    if identity:
        scale = max(abs(lhs), abs(rhs))
        ok = abs(lhs - rhs) <= eps * scale
    else:
        ok = lhs <= rhs * (1 + eps) or lhs <= 0.0
    ratio = lhs / rhs if rhs != 0 else (1.0 if lhs == 0 else math.inf)
    return VerificationReport(test_id, dict(params), lhs, rhs, ratio, "exact",
                              "pass" if ok else "fail", note)


def ratio_report(test_id, lhs, rhs, params, note=""):
    lhs, rhs = float(lhs), float(rhs)
    if lhs == 0 and rhs == 0:
        return VerificationReport(test_id, dict(params), lhs, rhs, math.nan, "ratio", "warn",
                                  note or "degenerate 0/0")
    if rhs == 0 or not (math.isfinite(lhs) and math.isfinite(rhs)):
        return VerificationReport(test_id, dict(params), lhs, rhs, math.inf, "ratio", "fail", note)
    return VerificationReport(test_id, dict(params), lhs, rhs, lhs / rhs, "ratio", "pass", note)


def _base_params(f: GridFunction, **kw):
    out = {"n": f.dim, "seed": f.meta.get("seed", "")}
    out.update(kw)
    return out


# ---------------------------------------------------------------- exact checks

def level_window(F: GridFunction) -> range:
    """Levels ``k`` at which the shells meet the grid (plus a margin)."""
    lo = sum(math.floor(math.log2(h)) for h in F.spec.spacing) - 2
    hi = sum(math.ceil(math.log2(N * h)) for h, N in zip(F.spec.spacing, F.spec.count)) + 1
    return range(lo, hi + 1)


def check_cross_inequalities(f: GridFunction, k: int, _cache=None) -> list:
    """Energy of ``f*`` on ``[0, 2**k]`` vs. the stepped cross, and the shell bound."""
    fs, F = _cache if _cache is not None else (rearrangement_1d(f), repeated_rearrangement(f))
    params = _base_params(f, k=k)
    lower = exact_report("cross_energy_lower", step_integral(fs, 2, 0.0, 2.0**k),
                         cross_integral(F, k), params)
    upper = exact_report("shell_energy_upper", block_integral(F, k),
                         step_integral(fs, 2, 2.0 ** (k - SHELL_TAIL_OFFSET)), params,
                         note="tail from 2**(k-1)")
    return [lower, upper]


def check_cross_all_levels(f: GridFunction) -> list:
    cache = (rearrangement_1d(f), repeated_rearrangement(f))
    out = []
    for k in level_window(cache[1]):
        out.extend(check_cross_inequalities(f, k, cache))
    return out


def check_rearrangement_identities(f: GridFunction) -> list:
    """Norm preservation under both rearrangements and the total-energy identity."""
    fs = rearrangement_1d(f)
    F = repeated_rearrangement(f)
    out = []
    for p in (1.0, 2.0, 3.0):
        direct = float(np.sum(np.abs(f.values) ** p) * f.cell_volume)
        out.append(exact_report("rearranged_lp_1d", step_integral(fs, p), direct,
                                _base_params(f, p=p), identity=True))
        out.append(exact_report("rearranged_lp_repeated",
                                float(np.sum(F.values**p) * F.cell_volume), direct,
                                _base_params(f, p=p), identity=True))
    total = float(np.sum(F.values**2) * F.cell_volume)
    out.append(exact_report("total_energy_identity", step_integral(fs, 2), total,
                            _base_params(f), identity=True))
    return out


def check_q_embedding(f: GridFunction, p: float, q: float, q1: float, F=None) -> VerificationReport:
    """Block quasinorm is non-increasing in its summation exponent."""
    if not q <= q1:
        raise ValueError("need q <= q1")
    F = repeated_rearrangement(f) if F is None else F
    return exact_report("frak_q_monotone", frak_norm(F, p, q1), frak_norm(F, p, q),
                        _base_params(f, p=p, q=q, r=q1))


def check_homogeneity(f: GridFunction, alpha: float = -2.5, p: float = 1.5, q: float = 2.0) -> list:
    g = f.scale(alpha)
    F, G = repeated_rearrangement(f), repeated_rearrangement(g)
    a = abs(alpha)
    return [
        exact_report("homogeneous_lorentz", lorentz_norm(rearrangement_1d(g), p, q),
                     a * lorentz_norm(rearrangement_1d(f), p, q), _base_params(f, p=p, q=q),
                     identity=True),
        exact_report("homogeneous_frak", frak_norm(G, p, q), a * frak_norm(F, p, q),
                     _base_params(f, p=p, q=q), identity=True),
    ]


# ---------------------------------------------------------------- Hardy sums

def _lq(x: np.ndarray, q: float) -> float:
    return float(x.max()) if math.isinf(q) else float(np.sum(x**q) ** (1.0 / q))


def _lh_cumulative(b: np.ndarray, h: float, reverse: bool) -> np.ndarray:
    a = np.abs(b)[::-1] if reverse else np.abs(b)
    c = np.maximum.accumulate(a) if math.isinf(h) else np.cumsum(a**h) ** (1.0 / h)
    return c[::-1] if reverse else c


def hardy_sides(b, alpha: float, q: float, h: float, k0: int = 0):
    """Both Hardy-type sums for ``b_k`` (``k = k0, k0+1, ...``), tails closed form.

    Returns ``((lhs_below, rhs_below), (lhs_above, rhs_above))`` as norms.
    """
    b = np.asarray(b, dtype=float)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    ks = k0 + np.arange(b.size)
    k1 = ks[-1]
    below = _lh_cumulative(b, h, reverse=False)
    above = _lh_cumulative(b, h, reverse=True)
    w_dn, w_up = 2.0 ** (-alpha * ks), 2.0 ** (alpha * ks)
    total = below[-1] if b.size else 0.0
    if math.isinf(q):
        lhs1 = float(np.max(w_dn * below))
        lhs2 = float(np.max(w_up * above))
    else:
        tail1 = total**q * 2.0 ** (-alpha * (k1 + 1) * q) / (1 - 2.0 ** (-alpha * q))
        tail2 = total**q * 2.0 ** (alpha * (k0 - 1) * q) / (1 - 2.0 ** (-alpha * q))
        lhs1 = (float(np.sum((w_dn * below) ** q)) + tail1) ** (1.0 / q)
        lhs2 = (float(np.sum((w_up * above) ** q)) + tail2) ** (1.0 / q)
    rhs1 = _lq(w_dn * np.abs(b), q)
    rhs2 = _lq(w_up * np.abs(b), q)
    return (lhs1, rhs1), (lhs2, rhs2)


def check_hardy(b, alpha: float, q: float, h: float, k0: int = 0, seed="") -> list:
    (l1, r1), (l2, r2) = hardy_sides(b, alpha, q, h, k0)
    params = {"n": 1, "p": alpha, "q": q, "r": h, "seed": seed}
    return [ratio_report("hardy_cumulative_below", l1, r1, params),
            ratio_report("hardy_cumulative_above", l2, r2, params)]


# ---------------------------------------------------------------- ratio checks

def check_space_embeddings(f: GridFunction, p: float, q: float) -> VerificationReport:
    """Lorentz norm vs. block quasinorm, in the direction valid for ``p``."""
    lor = lorentz_norm(rearrangement_1d(f), p, q)
    frak = frak_norm(repeated_rearrangement(f), p, q)
    params = _base_params(f, p=p, q=q)
    if 1 < p < 2:
        return ratio_report("lorentz_to_frak", frak, lor, params)
    if 2 < p < math.inf:
        return ratio_report("frak_to_lorentz", lor, frak, params)
    raise ValueError("embedding needs 1 < p < 2 or 2 < p < inf")


def check_weighted_l2(g: GridFunction, p: float) -> VerificationReport:
    """Weighted L2 of ``(t_1...t_n)**(1/p') g**`` vs. its weighted L_p."""
    if not 1 < p < 2:
        raise ValueError("need 1 < p < 2")
    pp = conjugate_exponent(p)
    G = repeated_rearrangement(g)
    lhs = phi_functional(G, pp, 2.0)
    rhs = phi_functional(G, pp, p)
    return ratio_report("weighted_l2_vs_lp", lhs, rhs, _base_params(g, p=p))


def _fhat(f: GridFunction, fhat=None):
    fh = fourier_transform(f) if fhat is None else fhat
    note = "tail_warning" if "tail_warning" in fh.meta else ""
    return fh, note


def _qpow(x: float, q: float) -> float:
    return x if math.isinf(q) else x**q


def check_block_stein(f: GridFunction, p: float, q: float, fhat=None) -> list:
    """Diagonal l2 block sums of ``fhat**`` against ``||f||_{p,q}``, and the converse.

    Both sides are q-th powers (plain values for ``q = inf``).
    """
    if not 1 < p < 2:
        raise ValueError("need 1 < p < 2")
    pp = conjugate_exponent(p)
    fh, note = _fhat(f, fhat)
    Fh = repeated_rearrangement(fh)
    params = _base_params(f, p=p, q=q)
    fwd = ratio_report("stein_block_fourier", lattice_block_sum(Fh, pp, q),
                       _qpow(lorentz_norm(rearrangement_1d(f), p, q), q), params, note)
    inv = ratio_report("stein_block_inverse", _qpow(lorentz_norm(rearrangement_1d(fh), pp, q), q),
                       lattice_block_sum(repeated_rearrangement(f), p, q), params, note)
    return [fwd, inv]


def check_maximal_stein(f: GridFunction, p: float, r: float, q: float, fhat=None,
                        mode: str = "auto") -> VerificationReport:
    """Diagonal l_r sums of the box-maximal function of ``fhat``."""
    if not 1 < p < r < math.inf:
        raise ValueError("need 1 < p < r < inf")
    pp = conjugate_exponent(p)
    fh, note = _fhat(f, fhat)
    M = maximal_grid(fh, mode)
    if M.meta.get("maximal_mode") == "dyadic":
        note = ";".join(x for x in (note, "maximal_mode=dyadic") if x)
    lhs = lattice_block_sum(M, pp, q, inner=r)
    rhs = _qpow(lorentz_norm(rearrangement_1d(f), p, q), q)
    return ratio_report("stein_block_maximal", lhs, rhs, _base_params(f, p=p, q=q, r=r), note)


def check_anisotropic_stein(f: GridFunction, p, q, fhat=None, mode: str = "auto") -> list:
    """Maximal-function norm of ``fhat`` against the anisotropic Lorentz norm of f.

    Also reports the weak endpoint form with the mixed ``A_{p,1}`` norm.
    """
    pv = tuple(np.broadcast_to(np.asarray(p, dtype=float), (f.dim,)).tolist())
    qv = tuple(np.broadcast_to(np.asarray(q, dtype=float), (f.dim,)).tolist())
    if not all(1 < x < math.inf for x in pv):
        raise ValueError("need 1 < p_j < inf")
    pp = conjugate_exponent(pv)
    fh, note = _fhat(f, fhat)
    M = maximal_grid(fh, mode)
    if M.meta.get("maximal_mode") == "dyadic":
        note = ";".join(x for x in (note, "maximal_mode=dyadic") if x)
    params = _base_params(f, p=pv, q=qv)
    strong = ratio_report("stein_anisotropic_maximal", n_norm(M, pp, qv),
                          anisotropic_lorentz_norm(f, pv, qv), params, note)
    weak = ratio_report("weak_maximal_mixed", n_norm(M, pp, math.inf),
                        mixed_lorentz_norm(f, pv, 1.0), _base_params(f, p=pv, q=math.inf), note)
    return [strong, weak]


def check_frak_stein(f: GridFunction, p: float, q: float, fhat=None) -> list:
    """Block quasinorm forms: strong, dual direction, and the weak endpoint."""
    if not 1 < p < 2:
        raise ValueError("need 1 < p < 2")
    pp = conjugate_exponent(p)
    fh, note = _fhat(f, fhat)
    Fh, F = repeated_rearrangement(fh), repeated_rearrangement(f)
    fs, fhs = rearrangement_1d(f), rearrangement_1d(fh)
    params = _base_params(f, p=p, q=q)
    return [
        ratio_report("frak_stein_strong", frak_norm(Fh, pp, q), lorentz_norm(fs, p, q), params, note),
        ratio_report("frak_stein_dual", lorentz_norm(fhs, pp, q), frak_norm(F, p, q), params, note),
        ratio_report("frak_stein_weak", frak_norm(Fh, pp, math.inf), lorentz_norm(fs, p, p),
                     _base_params(f, p=p, q=math.inf), note),
    ]


def check_classical_stein(f: GridFunction, p: float, q: float, fhat=None) -> list:
    """Lorentz-space Fourier bound and its weighted-integral forms."""
    if not 1 < p < 2:
        raise ValueError("need 1 < p < 2")
    pp = conjugate_exponent(p)
    fh, note = _fhat(f, fhat)
    fs, fhs = rearrangement_1d(f), rearrangement_1d(fh)
    lp = lorentz_norm(fs, p, p)
    params = _base_params(f, p=p, q=q)
    return [
        ratio_report("stein_lorentz", lorentz_norm(fhs, pp, q), lorentz_norm(fs, p, q), params, note),
        ratio_report("stein_weighted", lorentz_norm(fhs, pp, p), lp, _base_params(f, p=p), note),
        ratio_report("stein_repeated", phi_functional(repeated_rearrangement(fh), pp, p), lp,
                     _base_params(f, p=p), note),
    ]


def dilation_ratios(check, f: GridFunction, js=range(-3, 4), **kw) -> dict:
    """Ratios of every report of ``check`` across dyadic dilations ``f(2**j x)``."""
    out = {}
    for j in js:
        reps = check(f.dilate(j), **kw)
        reps = reps if isinstance(reps, list) else [reps]
        for rep in reps:
            out.setdefault(rep.test_id, []).append(rep.ratio)
    return out


# ---------------------------------------------------------------- sharpness

@dataclass
class SharpnessReport:
    n: int
    p: float
    rows: list  # (r, B(r), 2**(r/p') B(r), classical(r))
    slope: float
    classical_slope: float
    fit_range: tuple = field(default=(0, 0))


def cross_block_mass(r: int, n: int, s: float = 2.0) -> float:
    """``(sum_{m in D_r, m >= 0} chi(2**m)**s)**(1/s)`` for the staircase of order r.

    The staircase is a down-set anchored at the origin, so it is its own
    repeated rearrangement and the dyadic samples are membership tests.
    """
    ms = np.array(diag_set(r, ((0,) * n, (r,) * n)), dtype=float)
    vals = cross_indicator_at(2.0**ms, r, n)
    return float(np.sum(vals**s) ** (1.0 / s))


def fit_slope(x, y) -> float:
    """Least-squares slope of ``log2 y`` against ``log2 x``."""
    return float(np.polyfit(np.log2(np.asarray(x, float)), np.log2(np.asarray(y, float)), 1)[0])


def sharpness_experiment(n: int = 2, p: float = 1.5, r_range=range(8, 25)) -> SharpnessReport:
    """Growth of the diagonal l2 mass of the staircase indicator in r.

    Alongside, the same mass with exponent ``p`` gives the coarser order
    ``r**(1/p)`` that a plain Lorentz-norm bound produces.
    """
    rs = [int(r) for r in r_range]
    if len(rs) < 4 or min(rs) < 1:
        raise ValueError("need at least 4 orders r >= 1")
    pp = conjugate_exponent(p)
    rows = []
    for r in rs:
        B = cross_block_mass(r, n, 2.0)
        rows.append((r, B, 2.0 ** (r / pp) * B, cross_block_mass(r, n, p)))
    slope = fit_slope(rs, [row[1] for row in rows])
    cslope = fit_slope(rs, [row[3] for row in rows])
    return SharpnessReport(n, p, rows, slope, cslope, (rs[0], rs[-1]))


# ---------------------------------------------------------------- suites

SUITES = ("exact", "stein", "hardy", "all")


def _exact_jobs(spec: CorpusSpec) -> list:
    f = generate(spec)
    out = check_rearrangement_identities(f)
    out += check_cross_all_levels(f)
    F = repeated_rearrangement(f)
    for q, q1 in ((1.0, 2.0), (2.0, 4.0), (2.0, math.inf)):
        out.append(check_q_embedding(f, 1.5, q, q1, F))
    out += check_homogeneity(f)
    return out


def _stein_jobs(spec: CorpusSpec) -> list:
    f = generate(spec)
    if not np.any(f.values):
        return [ratio_report("stein_block_fourier", 0.0, 0.0, _base_params(f, p=1.5, q=1.5))]
    fh = fourier_transform(f)
    out = []
    for q in (1.5, 2.0):
        out += check_block_stein(f, 1.5, q, fh)
    out.append(check_maximal_stein(f, 1.5, 2.0, 2.0, fh))
    pv = (1.5,) if f.dim == 1 else (1.5, 1.8) + (1.5,) * (f.dim - 2)
    out += check_anisotropic_stein(f, pv, (2.0,) * f.dim, fh)
    out += check_frak_stein(f, 1.5, 2.0, fh)
    out += check_classical_stein(f, 1.5, 2.0, fh)
    for p in (1.2, 1.5, 1.8):
        out.append(check_weighted_l2(fh, p))
    out.append(check_space_embeddings(f, 1.5, 2.0))
    out.append(check_space_embeddings(f, 3.0, 2.0))
    return out


def hardy_sequence(seed: int, length: int = 24) -> tuple:
    """Seeded finitely supported sequence with log-uniform magnitudes."""
    rng = np.random.default_rng(seed)
    b = 2.0 ** rng.uniform(-8, 8, size=length) * (rng.random(length) < 0.7)
    k0 = int(rng.integers(-12, 4))
    return b, k0


def _hardy_jobs(seed: int) -> list:
    b, k0 = hardy_sequence(seed)
    out = []
    for alpha in (0.5, 1.0):
        for q in (1.0, 2.0, math.inf):
            for h in (1.0, 2.0, math.inf):
                out += check_hardy(b, alpha, q, h, k0, seed)
    return out


def _run_job(job):
    kind, payload = job
    if kind == "exact":
        return _exact_jobs(payload)
    if kind == "stein":
        return _stein_jobs(payload)
    return _hardy_jobs(payload)


def _sort_key(rep: VerificationReport):
    pr = rep.params
    return (rep.test_id, str(pr.get("n", "")), str(pr.get("seed", "")), rep.key,
            str(pr.get("k", "")), repr(rep.lhs), repr(rep.rhs))


def run_suite(name: str, specs, jobs: int = 1, hardy_seeds=range(100)) -> list:
    """Run a suite over corpus entries; output order is canonical."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    work = []
    if name in ("exact", "all"):
        work += [("exact", s) for s in specs]
    if name in ("stein", "all"):
        work += [("stein", s) for s in specs]
    if name in ("hardy", "stein", "all"):
        work += [("hardy", int(s)) for s in hardy_seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_job, work))
    else:
        chunks = [_run_job(w) for w in work]
    reports = [rep for chunk in chunks for rep in chunk]
    return sorted(reports, key=_sort_key)


def max_ratios(reports) -> dict:
    out = {}
    for rep in reports:
        if rep.mode == "ratio" and rep.status == "pass":
            out[rep.key] = max(out.get(rep.key, 0.0), rep.ratio)
    return dict(sorted(out.items()))


def apply_baseline(reports, baseline: dict, slack: float = BASELINE_SLACK) -> list:
    """Fail ratio reports whose ratio exceeds ``baseline * slack``."""
    out = []
    for rep in reports:
        if rep.mode == "ratio" and rep.status == "pass":
            ref = baseline.get(rep.key)
            if ref is None:
                rep = replace(rep, status="warn", note=(rep.note + ";no baseline").lstrip(";"))
            elif rep.ratio > ref * slack:
                rep = replace(rep, status="fail", note=(rep.note + ";baseline breach").lstrip(";"))
        out.append(rep)
    return out
