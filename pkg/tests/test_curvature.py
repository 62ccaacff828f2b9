"""Sectional and Gaussian curvature, closed forms, grids."""

import numpy as np
import pytest
import scipy.special

from dirgeo.curvature import (
    asymptotic_limits,
    curvature_grid,
    gaussian_2d,
    principal_curvatures,
    sectional,
    sectional_axes,
)
from dirgeo.families import family
from dirgeo.geometry import as_point

from conftest import random_point


def test_sectional_negative(mf):
    rng = np.random.default_rng(31)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        x = random_point(rng, n, -2.0, 2.0)
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        assert sectional(mf, x, u, v) < 0.0


def test_sectional_plane_invariance(mf):
    # K depends on the plane, not on the basis chosen inside it.
    rng = np.random.default_rng(32)
    x = random_point(rng, 4)
    u = rng.standard_normal(4)
    v = rng.standard_normal(4)
    k = sectional(mf, x, u, v)
    assert sectional(mf, x, v, u) == pytest.approx(k, rel=1e-12)
    assert sectional(mf, x, 2.0 * u, v - 0.7 * u) == pytest.approx(k, rel=1e-9)


def test_sectional_degenerate_plane_rejected(mf):
    x = as_point([1.0, 2.0, 3.0])
    u = np.array([1.0, 0.5, -0.3])
    with pytest.raises(ValueError):
        sectional(mf, x, u, 2.0 * u)


def test_sectional_axes_matches_generic(mf):
    rng = np.random.default_rng(33)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        x = random_point(rng, n)
        i, j = sorted(rng.choice(n, size=2, replace=False))
        e_i = np.zeros(n)
        e_i[i] = 1.0
        e_j = np.zeros(n)
        e_j[j] = 1.0
        direct = sectional(mf, x, e_i, e_j)
        assert sectional_axes(mf, x, int(i), int(j)) == pytest.approx(direct, rel=1e-10)


def test_sectional_axes_validation(mf):
    x = as_point([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        sectional_axes(mf, x, 0, 0)
    with pytest.raises(ValueError):
        sectional_axes(mf, x, 0, 3)


def test_gaussian_2d_equals_sectional(mf):
    rng = np.random.default_rng(34)
    for _ in range(15):
        x, y = np.exp(rng.uniform(-2, 2, 2))
        k = gaussian_2d(mf, x, y)
        assert k == pytest.approx(sectional_axes(mf, as_point([x, y]), 0, 1), rel=1e-11)
        assert gaussian_2d(mf, y, x) == pytest.approx(k, rel=1e-11)


def test_gaussian_2d_broadcasts(mf):
    x = np.logspace(-1, 1, 5)
    out = gaussian_2d(mf, x[:, None], x[None, :])
    assert out.shape == (5, 5)
    assert out[2, 3] == pytest.approx(gaussian_2d(mf, x[2], x[3]), rel=1e-14)
    assert np.all(out < 0.0)


def test_asymptotic_limits_match_grid_limits():
    # Push y to the ends numerically and compare with the closed forms.
    mf = family("trigamma")
    for x in (0.5, 1.0, 2.0, 5.0):
        lo, hi = asymptotic_limits(mf, x)
        assert gaussian_2d(mf, x, 1e-8) == pytest.approx(lo, abs=2e-4)
        assert gaussian_2d(mf, x, 1e7) == pytest.approx(hi, abs=2e-4)


def test_asymptotic_limits_reject_other_families():
    with pytest.raises(ValueError):
        asymptotic_limits(family("rational"), 1.0)


def test_corner_values_trigamma():
    # The three asymptotic corners of the (x, y) square.
    mf = family("trigamma")
    assert gaussian_2d(mf, 100.0, 100.0) == pytest.approx(-0.5, abs=1e-2)
    assert gaussian_2d(mf, 1e-3, 1e3) == pytest.approx(-0.25, abs=1e-2)
    assert abs(gaussian_2d(mf, 1e-5, 1e-5)) < 0.01


def test_principal_curvatures_positive(mf):
    rng = np.random.default_rng(35)
    for _ in range(10):
        x = random_point(rng, int(rng.integers(2, 6)), -3.0, 3.0)
        pcs = principal_curvatures(mf, x)
        assert np.all(np.diff(pcs) >= 0.0)
        assert pcs[0] > 0.0
        bound = (1.0 + 1e-12) * max(mf.df(x)) / np.sqrt(
            mf.f(x.sum()) - mf.f(x).sum()
        ) + 1e-12
        assert pcs[-1] <= bound


def test_curvature_grid_layout(mf):
    axis, K = curvature_grid(mf, 0.1, 10.0, 7)
    assert axis.shape == (7,) and K.shape == (7, 7)
    assert axis[0] == pytest.approx(0.1) and axis[-1] == pytest.approx(10.0)
    # K[i, j] sits at (x = axis[j], y = axis[i])
    assert K[2, 5] == pytest.approx(gaussian_2d(mf, axis[5], axis[2]), rel=1e-12)
    assert np.allclose(K, K.T, rtol=1e-10)  # symmetric scene on a square grid


def test_curvature_grid_linear_spacing(mf):
    axis, _ = curvature_grid(mf, 1.0, 2.0, 5, log_spacing=False)
    assert np.allclose(np.diff(axis), 0.25)


def test_curvature_grid_z_matches_sectional():
    mf = family("trigamma")
    axis, diff = curvature_grid(mf, 0.02, 0.08, 4, log_spacing=False, z=0.01)
    i, j = 1, 2
    x, y = axis[j], axis[i]
    k3 = sectional_axes(mf, as_point([x, y, 0.01]), 0, 1)
    k2 = gaussian_2d(mf, x, y)
    assert diff[i, j] == pytest.approx(k3 - k2, rel=1e-9)


def test_dimension_gap_changes_sign_on_wider_square():
    # The third coordinate flips the sign of the x-y curvature once the
    # square reaches past x, y ~ 0.5; on [0.005, 1]^2 both signs appear.
    mf = family("trigamma")
    _, diff = curvature_grid(mf, 0.005, 1.0, 80, log_spacing=False, z=0.01)
    assert float(diff.min()) < 0.0 < float(diff.max())


def test_reference_value_cross_family():
    # K is a smooth functional of f; the two families agree loosely at
    # moderate arguments but are distinct metrics.
    tri, rat = family("trigamma"), family("rational")
    kt = gaussian_2d(tri, 1.0, 1.0)
    kr = gaussian_2d(rat, 1.0, 1.0)
    assert kt < 0.0 and kr < 0.0
    assert kt != pytest.approx(kr, rel=1e-3)
    assert kt == pytest.approx(kr, rel=0.5)


def test_gaussian_2d_against_polygamma_formula():
    # Spot check of the closed form with explicit polygamma values.
    mf = family("trigamma")
    x, y = 0.7, 1.9
    p1x, p1y, p1t = (scipy.special.polygamma(1, v) for v in (x, y, x + y))
    p2x, p2y, p2t = (scipy.special.polygamma(2, v) for v in (x, y, x + y))
    fx, fy, ft = 1.0 / p1x, 1.0 / p1y, 1.0 / p1t
    dfx, dfy, dft = -p2x / p1x**2, -p2y / p1y**2, -p2t / p1t**2
    gap = ft - fx - fy
    expect = -0.25 * (ft * dfx * dfy - fx * dft * dfy - fy * dft * dfx) / gap**2
    assert gaussian_2d(mf, x, y) == pytest.approx(expect, rel=1e-11)
