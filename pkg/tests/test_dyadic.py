import itertools
import math

import numpy as np
import pytest

from steinlab.dyadic import (
    block_integral,
    block_levels,
    cross,
    cross_integral,
    diag_set,
    lambda_block,
    lambda_measure,
    sample_levels,
    series,
)
from steinlab.gridfn import as_grid_function
from steinlab.rearrange import evaluate_orthant, repeated_rearrangement


def orthant(values, spacing):
    return repeated_rearrangement(as_grid_function(values, spacing))


def shell_oracle(F, r, power=2.0):
    """Direct enumeration of int over Lambda_r of |F|**power.

    Every m with sum(m) = r and 2**m_j inside the grid is visited; the overlap
    of [2**m, 2**(m+1)) with each cell is computed per axis.
    """
    tops = [math.ceil(math.log2(N * h)) for h, N in zip(F.spec.spacing, F.spec.count)]
    A = np.abs(F.values) ** power
    n = F.dim
    lows = [r - (sum(tops) - tops[j]) for j in range(n)]
    total = 0.0
    for m in itertools.product(*[range(lows[j], tops[j] + 1) for j in range(n)]):
        if sum(m) != r:
            continue
        T = A
        for j in range(n):
            e = np.arange(F.spec.count[j] + 1) * F.spec.spacing[j]
            a, b = 2.0 ** m[j], 2.0 ** (m[j] + 1)
            w = np.clip(np.minimum(e[1:], b) - np.maximum(e[:-1], a), 0, None)
            T = np.tensordot(w, T, axes=([0], [0]))
        total += float(T)
    return total


def test_diag_set_examples():
    assert diag_set(0, ((-1, -1), (1, 1))) == [(-1, 1), (0, 0), (1, -1)]
    assert diag_set(3, ((0,), (5,))) == [(3,)]
    assert len(diag_set(2, ((0, 0, 0), (2, 2, 2)))) == 6


def test_lambda_measure():
    assert lambda_measure(0, ((-1, -1), (1, 1))) == 3.0
    assert lambda_measure(4, ((0,), (9,))) == 16.0
    assert lambda_measure(9, ((0, 0), (1, 1))) == 0.0


def test_regions():
    w = ((-2, -2), (2, 2))
    blk = lambda_block(0, w)
    assert blk.contains((1.5, 1.0)) and not blk.contains((2.0, 1.0))
    G = cross(0, w)
    assert G.contains((0.3, 0.3)) and G.contains((1.5, 1.0))
    assert G.measure == pytest.approx(sum(lambda_measure(r, w) for r in range(-4, 1)))


def test_block_integral_examples():
    F = orthant(np.ones(4), 0.25)
    assert block_integral(F, -2) == 0.25
    assert block_integral(orthant(np.zeros(4), 0.25), 0) == 0.0
    F2 = orthant(np.ones((4, 4)), 0.25)
    assert block_integral(F2, -3) == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("shape, spacing", [((16,), 0.25), ((8, 16), (0.5, 0.125)), ((4, 4, 8), 0.5)])
def test_block_integral_matches_enumeration(shape, spacing):
    rng = np.random.default_rng(sum(shape))
    F = orthant(rng.normal(size=shape), spacing)
    for r in range(-8, 7):
        assert block_integral(F, r) == pytest.approx(shell_oracle(F, r), rel=1e-12, abs=1e-300)


def test_blocks_partition_energy():
    rng = np.random.default_rng(3)
    F = orthant(rng.normal(size=(8, 8)), 0.25)
    energy = float(np.sum(F.values**2) * F.cell_volume)
    assert cross_integral(F, 10) == pytest.approx(energy, rel=1e-12)
    partial = sum(block_integral(F, r) for r in range(-200, 4))
    assert partial == pytest.approx(cross_integral(F, 3), rel=1e-12)


def test_cross_integral_of_indicator():
    F = orthant(np.ones(4), 0.25)
    assert cross_integral(F, 0) == pytest.approx(1.0, rel=1e-15)
    assert cross_integral(F, -1) == pytest.approx(1.0, rel=1e-15)
    assert cross_integral(F, -2) == pytest.approx(0.5, rel=1e-15)


def test_unaligned_grid_is_rejected():
    with pytest.raises(ValueError):
        block_levels(orthant(np.ones(3), 0.3))


def test_sample_levels_match_direct_sums():
    rng = np.random.default_rng(5)
    F = orthant(rng.random((6, 5)), (0.3, 0.7))
    lv = sample_levels(F, 2.0)
    for k in range(-6, 4):
        direct = 0.0
        for m1 in range(k - 4, 4):
            m2 = k - m1
            direct += float(evaluate_orthant(F, [np.array([2.0**m1]), np.array([2.0**m2])])[0] ** 2)
        assert lv(np.array([k]))[0] == pytest.approx(direct, rel=1e-13)


def test_series_geometric_closed_form():
    F = orthant(np.ones(4), 0.25)  # indicator of (0, 1]
    for p, q in [(1.5, 2.0), (2.0, 1.0), (3.0, 4.0)]:
        lv = block_levels(F)
        expected = 2.0 ** (-1 / p) * (1 - 2.0 ** (-q / p)) ** (-1 / q)
        assert series(lv, 1 / p, q, inner=2.0) == pytest.approx(expected, rel=1e-13)
    assert series(block_levels(F), 0.5, math.inf, inner=2.0) == pytest.approx(2.0**-0.5)
    assert math.isinf(series(block_levels(F), 0.0, 2.0, inner=2.0))
    assert series(block_levels(orthant(np.zeros(2), 1.0)), 0.5, 2.0) == 0.0
