"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerances."""

import math
import time
from importlib import resources

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from steinlab import verify as V
from steinlab.corpus import CorpusSpec, generate, load_corpus
from steinlab.fourier import fourier_transform, native_frequency_grid, plancherel_defect
from steinlab.gridfn import as_grid_function, step_integral
from steinlab.maximal import box_maximal_average, box_maximal_average_bruteforce
from steinlab.rearrange import rearrangement_1d, repeated_rearrangement


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def seeded_corpus(count=200):
    """Half 1-D (up to 4096 cells), half 2-D (up to 64 x 64), mixed generators."""
    out = []
    for seed in range(count):
        rng = np.random.default_rng(seed)
        n = 1 + seed % 2
        side = int(rng.integers(2, 65)) if n == 2 else int(rng.integers(4, 4097))
        h = 2.0 ** int(rng.integers(-4, 2))
        kind = seed % 4
        if kind == 0:
            vals = rng.normal(size=(side,) * n)
        elif kind == 1:
            vals = 2.0 ** rng.uniform(-20, 20, size=(side,) * n) * rng.choice([-1, 1], size=(side,) * n)
        elif kind == 2:
            vals = rng.integers(-3, 4, size=(side,) * n).astype(float)
        else:
            spec = CorpusSpec("random", {"block": int(rng.integers(1, 5))}, seed,
                              {"n": n, "count": side, "spacing": h})
            out.append(generate(spec))
            continue
        out.append(as_grid_function(vals, h, tuple(-(side // 2) * h for _ in range(n))))
    return out


@pytest.fixture(scope="module")
def corpus():
    return seeded_corpus()


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b)) if max(abs(a), abs(b)) > 0 else 0.0


def test_criterion_01_rearrangement_exactness(corpus):
    t0 = time.perf_counter()
    worst = 0.0
    for f in corpus:
        F = repeated_rearrangement(f)
        s = rearrangement_1d(f)
        a = np.abs(f.values)
        for p in (1.0, 2.0, 3.0):
            direct = float(np.sum(a**p) * f.cell_volume)
            worst = max(worst, rel(step_integral(s, p), direct),
                        rel(float(np.sum(F.values**p) * F.cell_volume), direct))
    dt = time.perf_counter() - t0
    record(1, worst <= 1e-12 and dt < 10,
           f"L_p preservation over {len(corpus)} functions: max rel err {worst:.2e}, {dt:.2f}s")


def test_criterion_02_total_energy_identity(corpus):
    worst = 0.0
    for f in corpus:
        F = repeated_rearrangement(f)
        worst = max(worst, rel(step_integral(rearrangement_1d(f), 2), float(np.sum(F.values**2) * F.cell_volume)))
    record(2, worst <= 1e-12, f"int (f*)^2 vs int (repeated)^2: max rel err {worst:.2e}")


def test_criterion_03_cross_inequalities(corpus):
    fails, total = 0, 0
    for f in corpus:
        for rep in V.check_cross_all_levels(f):
            total += 1
            fails += rep.status != "pass"
    record(3, fails == 0, f"energy on [0,2^k] vs stepped cross, and shell vs tail from 2^(k-1): "
                          f"{fails} failures in {total} checks")


def test_criterion_04_q_embedding(corpus):
    fails, total = 0, 0
    for f in corpus:
        F = repeated_rearrangement(f)
        for q, q1 in ((1.0, 2.0), (2.0, 4.0), (2.0, math.inf)):
            for p in (1.5, 3.0):
                total += 1
                fails += V.check_q_embedding(f, p, q, q1, F).status != "pass"
    record(4, fails == 0, f"block quasinorm monotone in q: {fails} failures in {total} checks")


def test_criterion_05_fourier_accuracy():
    t0 = time.perf_counter()
    N, ext = 4096, 64.0
    g = generate(CorpusSpec("gauss", {}, 0, {"n": 1, "count": N, "spacing": ext / N}))
    gh = fourier_transform(g)
    y = gh.spec.centers(0)
    exact = math.sqrt(2 * math.pi) * np.exp(-(y**2) / 2)
    g_err = float(np.max(np.abs(gh.values - exact)) / exact.max())

    b = generate(CorpusSpec("box", {"sides": 2.0}, 0, {"n": 1, "count": N, "spacing": ext / N}))
    bh = fourier_transform(b, native_frequency_grid(b.spec))
    yb = bh.spec.centers(0)
    berr = np.abs(bh.values - 2 * np.sinc(yb / np.pi)) / 2.0
    b_err = float(berr[np.abs(yb) <= ext / 2].max())
    b_full = float(berr.max())

    defect = plancherel_defect(g)
    dt = time.perf_counter() - t0
    ok = g_err <= 1e-6 and b_err <= 1e-3 and defect <= 1e-8 and dt < 5
    record(5, ok, f"gaussian {g_err:.2e}, box sinc {b_err:.2e} on |y|<=32 "
                  f"({b_full:.2e} up to Nyquist), plancherel {defect:.2e}, {dt:.2f}s")


def test_criterion_06_maximal_oracle():
    t0 = time.perf_counter()
    mismatches, total = 0, 0
    worst_float = 0.0
    for seed in range(50):
        rng = np.random.default_rng(1000 + seed)
        ints = as_grid_function(rng.integers(-20, 21, size=(8, 8)).astype(float), 1.0, -4.0)
        floats = as_grid_function(rng.normal(size=(8, 8)), 0.5, -2.0)
        for _ in range(10):
            t = rng.uniform(0, 8, size=2)
            total += 1
            mismatches += box_maximal_average(ints, t) != box_maximal_average_bruteforce(ints, t)
            a = box_maximal_average(floats, t / 2)
            worst_float = max(worst_float, rel(a, box_maximal_average_bruteforce(floats, t / 2)))
    dt = time.perf_counter() - t0
    record(6, mismatches == 0 and worst_float <= 1e-12 and dt < 30,
           f"prefix sums vs enumeration: {mismatches}/{total} exact mismatches (integer grids), "
           f"float grids max rel {worst_float:.1e}, {dt:.2f}s")


def test_criterion_07_sharpness():
    t0 = time.perf_counter()
    exact = all(V.cross_block_mass(r, 2) == math.sqrt(r + 1) for r in range(1, 25))
    rep = V.sharpness_experiment(2, 1.5, range(8, 25))
    dt = time.perf_counter() - t0
    ok = exact and 0.4 <= rep.slope <= 0.6 and abs(rep.classical_slope - 2 / 3) <= 0.05 and dt < 5
    record(7, ok, f"B(r)=sqrt(r+1) for r in [1,24]: {exact}; slope {rep.slope:.3f}; "
                  f"l^p-block comparison slope {rep.classical_slope:.3f} (target 0.667+-0.05), {dt:.2f}s")


def test_criterion_08_dilation_stability():
    t0 = time.perf_counter()
    g = generate(CorpusSpec("gauss", {"sigma": [1.0, 0.5]}, 0, {"n": 2, "count": 32, "spacing": 0.5}))
    spreads = {}
    spreads.update(V.dilation_ratios(V.check_block_stein, g, p=1.5, q=1.5))
    spreads.update(V.dilation_ratios(V.check_maximal_stein, g, p=1.5, r=2.0, q=2.0))
    spreads.update(V.dilation_ratios(V.check_anisotropic_stein, g, p=(1.5, 1.8), q=(2.0, 2.0)))
    worst = max(max(r) / min(r) - 1 for r in spreads.values())
    dt = time.perf_counter() - t0
    record(8, worst < 0.01 and dt < 120,
           f"{len(spreads)} ratios over 2^-3..2^3: max variation {worst:.1e}, {dt:.2f}s")


def test_criterion_09_ratio_regression():
    import json

    t0 = time.perf_counter()
    specs = load_corpus(resources.files("steinlab") / "data" / "default_corpus.json")
    with open(resources.files("steinlab") / "data" / "baseline.json") as fh:
        baseline = json.load(fh)["max_ratio"]
    reports = V.apply_baseline(V.run_suite("stein", specs, jobs=1), baseline)
    breaches = [r for r in reports if r.status == "fail"]
    missing = [r for r in reports if r.mode == "ratio" and r.note.endswith("no baseline")]
    dt = time.perf_counter() - t0
    record(9, not breaches and not missing and dt < 300,
           f"{len(reports)} reports, {len(breaches)} baseline breaches, {len(missing)} unbaselined, {dt:.1f}s")


def test_criterion_10_hardy():
    import json

    worst = 0.0
    for alpha in (0.5, 1.0):
        for q in (1.0, 2.0, 3.0):
            (l1, r1), (l2, r2) = V.hardy_sides([0.0, 5.0, 0.0], alpha, q, 2.0, k0=3)
            bound = (1 - 2.0 ** (-alpha * q)) ** (-1 / q)
            worst = max(worst, rel(l1 / r1, bound), rel(l2 / r2, bound))
        beta, K = 0.25, 120
        b = beta ** np.arange(K)
        x, z = 2.0**-alpha, 2.0**alpha
        (l1, r1), (l2, r2) = V.hardy_sides(b, alpha, 1.0, 1.0, k0=0)
        below = (1 / (1 - x) - beta / (1 - beta * x)) / (1 - beta)
        above = (x / (1 - x) + 1 / (1 - z * beta)) / (1 - beta)
        worst = max(worst, rel(l1, below), rel(r1, 1 / (1 - beta * x)),
                    rel(l2, above), rel(r2, 1 / (1 - beta * z)))
        # q = 2 with h = 1: expand (1 - beta^(k+1))^2 into three geometric series
        (l1, _), _ = V.hardy_sides(b, alpha, 2.0, 1.0, k0=0)
        x2 = x * x
        s = (1 / (1 - x2) - 2 * beta / (1 - beta * x2) + beta**2 / (1 - beta**2 * x2)) / (1 - beta) ** 2
        worst = max(worst, rel(l1, math.sqrt(s)))
    with open(resources.files("steinlab") / "data" / "baseline.json") as fh:
        baseline = json.load(fh)["max_ratio"]
    reports = V.apply_baseline(V.run_suite("hardy", [], jobs=1), baseline)
    breaches = sum(r.status == "fail" for r in reports)
    record(10, worst <= 1e-12 and breaches == 0,
           f"closed forms max rel err {worst:.1e}; {len(reports)} random-sequence reports, {breaches} breaches")
