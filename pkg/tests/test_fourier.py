import math

import numpy as np
import pytest

from symridge.errors import ConfigurationError
from symridge.fourier import (SpectralFunction, calibrate_spd_constant, euclidean_fourier, hf_forward,
                              hf_forward_at, hf_inverse, lambda_multiplier, plancherel_check,
                              spd_gaussian)
from symridge.spaces import (QuadratureGrid, ball_grid, boundary_grid, euclidean_grid, frequency_grid,
                             space_descriptor, spd_polar_grid)
from symridge.spd import omega_constant
from symridge.targets import gaussian, offset_bump, radial_bump, two_bump, zero


@pytest.fixture(scope="module")
def disk_setup():
    sp = space_descriptor("poincare_ball", 2)
    fg = frequency_grid(sp, 20.0, 128)
    bg = boundary_grid(sp, 128)
    xg = ball_grid(sp, 0.95, 64)
    return sp, fg, bg, xg


@pytest.fixture(scope="module")
def bump_spectrum(disk_setup):
    sp, fg, bg, xg = disk_setup
    f = radial_bump(0.6, 4.0)
    return f, hf_forward(f, sp, fg, bg, xg)


def disk_points(radius=0.8, n=9, angles=(0.1, 1.3, 2.9)):
    r = np.linspace(0, radius, n)
    return np.concatenate([np.stack([r * np.cos(t), r * np.sin(t)], 1) for t in angles])


def test_zero_function(disk_setup):
    sp, fg, bg, xg = disk_setup
    F = hf_forward(zero(), sp, frequency_grid(sp, 5.0, 8), boundary_grid(sp, 4), xg)
    assert np.all(F.values == 0)
    assert np.all(hf_inverse(F, disk_points()) == 0)


def test_radial_spectrum_is_boundary_invariant(bump_spectrum):
    _, F = bump_spectrum
    a = np.abs(F.values)
    spread = (a.max(1) - a.min(1)) / a.max()
    assert spread.max() <= 1e-6


def test_zero_frequency_value_matches_oracle(disk_setup):
    sp, _, bg, xg = disk_setup
    # int f(x) exp(<x,u>/2) dx by mpmath adaptive quadrature in polar coordinates
    v = hf_forward_at(radial_bump(0.6, 4.0), sp, np.zeros((1, 1)), boundary_grid(sp, 8), xg)
    np.testing.assert_allclose(v.real, 0.866654023672783073, atol=1e-8)
    assert np.abs(v.imag).max() < 1e-12


def test_round_trip(bump_spectrum):
    f, F = bump_spectrum
    x = disk_points()
    rec = hf_inverse(F, x)
    ref = f(x)
    assert np.max(np.abs(rec - ref)) / np.max(np.abs(ref)) <= 0.02


def test_inverse_is_linear(disk_setup, bump_spectrum):
    sp, fg, bg, xg = disk_setup
    _, F1 = bump_spectrum
    F2 = hf_forward(offset_bump((0.2, 0.1), 0.3), sp, fg, bg, xg)
    x = disk_points(n=4)
    lhs = hf_inverse(2.5 * F1 + F2 * (-0.75), x)
    rhs = 2.5 * hf_inverse(F1, x) - 0.75 * hf_inverse(F2, x)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))


def test_plancherel_zero(disk_setup):
    sp, fg, bg, xg = disk_setup
    assert plancherel_check(zero(), sp, fg, bg, xg) == (0.0, 0.0)


def test_plancherel_bump_and_homogeneity(disk_setup, bump_spectrum):
    sp, fg, bg, xg = disk_setup
    f, F = bump_spectrum
    lhs, rhs = plancherel_check(f, sp, fg, bg, xg, F=F)
    assert abs(lhs - rhs) / lhs <= 0.01
    lhs2, rhs2 = plancherel_check(f.scale(2.0), sp, fg, bg, xg, F=F * 2.0)
    assert (lhs2, rhs2) == (4 * lhs, 4 * rhs)


def test_plancherel_su11():
    sp = space_descriptor("poincare_disk_su11")
    fg, bg, xg = frequency_grid(sp, 20.0, 128), boundary_grid(sp, 128), ball_grid(sp, 0.95, 64)
    lhs, rhs = plancherel_check(offset_bump((0.3, -0.2), 0.35), sp, fg, bg, xg)
    assert abs(lhs - rhs) / lhs <= 0.01


def test_grid_mismatch(disk_setup):
    sp, fg, bg, xg = disk_setup
    with pytest.raises(ConfigurationError):
        hf_forward(zero(), sp, fg, boundary_grid(space_descriptor("poincare_ball", 3), 4), xg)
    with pytest.raises(ConfigurationError):
        hf_forward(zero(), sp, frequency_grid(space_descriptor("spd", 2), 2.0, 4), bg, xg)


def test_lambda_multiplier():
    sp = space_descriptor("poincare_ball", 2)
    fg = frequency_grid(sp, 3.0, 5)  # odd GL rule contains 0
    bg = boundary_grid(sp, 3)
    F = SpectralFunction(np.ones((5, 3)), fg, bg, sp)
    G = lambda_multiplier(F)
    assert np.all(G.values[2] == 0)
    dens = sp.plancherel(fg.nodes)
    np.testing.assert_allclose(lambda_multiplier(G).values, (dens**2)[:, None] * np.ones((5, 3)),
                               rtol=1e-15)
    sp3 = space_descriptor("poincare_ball", 3)
    g1 = QuadratureGrid(np.array([[2.0]]), np.ones(1), "one")
    b3 = boundary_grid(sp3, 2)
    F3 = SpectralFunction(np.full((1, len(b3)), 1.5 - 0.5j), g1, b3, sp3)
    np.testing.assert_allclose(lambda_multiplier(F3).values, 4 * F3.values)


def test_euclidean_fourier():
    xg = euclidean_grid(1, 10.0, 160)
    om = np.array([[0.0], [1.0], [2.0]])
    ref = math.sqrt(2 * math.pi) * np.exp(-0.5 * om[:, 0] ** 2)
    np.testing.assert_allclose(euclidean_fourier(gaussian(1.0), xg, om), ref, atol=1e-6)
    assert np.all(euclidean_fourier(zero(), xg, om) == 0)
    c = 0.7
    shifted = lambda x: gaussian(1.0)(x - c)
    np.testing.assert_allclose(euclidean_fourier(shifted, xg, om),
                               np.exp(-1j * om[:, 0] * c) * euclidean_fourier(gaussian(1.0), xg, om),
                               atol=1e-8)


@pytest.fixture(scope="module")
def spd_setup():
    sp = space_descriptor("spd", 2)
    fg = frequency_grid(sp, 8.0, 48)
    bg = boundary_grid(sp, 16)
    xg = spd_polar_grid(5.0, 56, 48)
    return sp, fg, bg, xg


def test_spd_tensor_path_matches_pointwise(spd_setup):
    sp, _, bg, _ = spd_setup
    fg = frequency_grid(sp, 4.0, 6)
    xg = spd_polar_grid(3.0, 12, 8)
    f = spd_gaussian(0.8)
    fast = hf_forward(f, sp, fg, bg, xg).values
    slow = hf_forward_at(f, sp, np.array(fg.nodes), bg, xg)
    np.testing.assert_allclose(fast, slow, rtol=1e-12, atol=1e-14)


def test_spd_plancherel(spd_setup):
    sp, fg, bg, xg = spd_setup
    lhs, rhs = plancherel_check(spd_gaussian(0.8), sp, fg, bg, xg)
    assert abs(lhs - rhs) / lhs <= 0.01


def test_spd_calibration_agrees_with_analytic_constant(spd_setup):
    sp, fg, bg, xg = spd_setup
    c = calibrate_spd_constant(sp, fg, bg, xg, width=0.8)
    assert c == pytest.approx(omega_constant(2), rel=0.01)


def test_two_bump_plancherel(disk_setup):
    sp, fg, bg, xg = disk_setup
    lhs, rhs = plancherel_check(two_bump(), sp, fg, bg, xg)
    assert abs(lhs - rhs) / lhs <= 0.01
