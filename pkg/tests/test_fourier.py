import math

import numpy as np
import pytest

from steinlab.corpus import CorpusSpec, generate
from steinlab.gridfn import GridFunction, GridSpec, as_grid_function
from steinlab.fourier import (
    default_frequency_grid,
    fourier_transform,
    inverse_fourier_transform,
    native_frequency_grid,
    plancherel_defect,
)


def gaussian_1d(N=4096, extent=64.0):
    return generate(CorpusSpec("gauss", {}, 0, {"n": 1, "count": N, "spacing": extent / N}))


def box_1d(N=4096, extent=64.0):
    return generate(CorpusSpec("box", {"sides": 2.0}, 0, {"n": 1, "count": N, "spacing": extent / N}))


def dft_oracle(f: GridFunction, out: GridSpec) -> np.ndarray:
    """Direct O(N M) sum over cell centres."""
    x = f.spec.centers(0)
    y = out.centers(0)
    return np.exp(-1j * np.outer(y, x)) @ f.values * f.spec.spacing[0]


def test_gaussian_closed_form():
    f = gaussian_1d()
    fh = fourier_transform(f)
    y = fh.spec.centers(0)
    exact = math.sqrt(2 * math.pi) * np.exp(-(y**2) / 2)
    assert np.max(np.abs(fh.values - exact)) / exact.max() <= 1e-6


def test_box_closed_form():
    f = box_1d()
    fh = fourier_transform(f, native_frequency_grid(f.spec))
    y = fh.spec.centers(0)
    err = np.abs(fh.values - 2 * np.sinc(y / np.pi)) / 2.0
    # the midpoint rule loses accuracy for the slowly decaying sinc near
    # Nyquist; the window [-32, 32] is the one used for x as well
    assert err[np.abs(y) <= 32].max() <= 1e-3
    assert err.max() <= 5e-3
    at_zero = fourier_transform(f, GridSpec.make((1,), 1.0, -0.5))
    assert at_zero.values[0] == pytest.approx(2.0, rel=1e-14)


def test_matches_direct_sum():
    rng = np.random.default_rng(1)
    f = as_grid_function(rng.normal(size=64), 0.125, -3.0)
    out = GridSpec.make((50,), 0.3, -7.1)
    assert np.allclose(fourier_transform(f, out).values, dft_oracle(f, out), rtol=0, atol=1e-12)


def test_tensor_gaussian_factorizes():
    N = 1024
    f = generate(CorpusSpec("gauss", {}, 0, {"n": 2, "count": N, "spacing": 64.0 / N}))
    fh = fourier_transform(f)
    y1, y2 = fh.spec.centers(0), fh.spec.centers(1)
    exact = 2 * math.pi * np.exp(-(y1[:, None] ** 2 + y2[None, :] ** 2) / 2)
    assert np.max(np.abs(fh.values - exact)) / exact.max() <= 1e-6


def test_round_trip():
    f = gaussian_1d(1024, 32.0)
    back = inverse_fourier_transform(fourier_transform(f, native_frequency_grid(f.spec)), f.spec)
    assert np.max(np.abs(back.values - f.values)) <= 1e-6
    zero = GridFunction(GridSpec.centered((8,), 0.5), np.zeros(8))
    assert not np.any(inverse_fourier_transform(zero).values)


def test_plancherel():
    assert plancherel_defect(gaussian_1d()) <= 1e-8
    assert plancherel_defect(box_1d()) <= 1e-3
    with pytest.raises(ValueError):
        plancherel_defect(GridFunction(GridSpec.centered((4,), 1.0), np.zeros(4)))


def test_plancherel_scaling_under_dilation():
    f = gaussian_1d(1024, 32.0)
    assert plancherel_defect(f.dilate(1)) == pytest.approx(plancherel_defect(f), abs=1e-12)


def test_linearity():
    rng = np.random.default_rng(2)
    spec = GridSpec.centered((128,), 0.125)
    f = GridFunction(spec, rng.normal(size=128))
    g = GridFunction(spec, rng.normal(size=128))
    lhs = fourier_transform(f.with_values(2.0 * f.values - 3.0 * g.values)).values
    rhs = 2.0 * fourier_transform(f).values - 3.0 * fourier_transform(g).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))


def test_default_grid_follows_dilation():
    spec = GridSpec.centered((100,), 0.25)
    a = default_frequency_grid(spec)
    b = default_frequency_grid(spec.scaled(0.5))
    assert b.spacing[0] == 2 * a.spacing[0]
    assert math.log2(a.spacing[0]).is_integer()


def test_tail_warning():
    f = as_grid_function(np.ones(16), 0.25, -2.0)
    assert "tail_warning" in fourier_transform(f).meta
    assert "tail_warning" not in fourier_transform(gaussian_1d(256, 32.0)).meta


def test_staircase_inverse_has_plancherel_norm():
    r = 3
    chi = generate(CorpusSpec("cross", {"r": r}, 0, {"n": 2, "count": 64, "spacing": 0.25}))
    g = chi.with_values(chi.values)
    out = native_frequency_grid(g.spec)
    f = inverse_fourier_transform(g, out)
    expected = (2 * math.pi) ** -1.0 * math.sqrt(chi.meta["support_measure"])
    assert f.lp_norm(2) == pytest.approx(expected, rel=1e-10)
