import math

import numpy as np
import pytest
from scipy import integrate

from symridge._numerics import gl_nodes
from symridge.errors import ConfigurationError
from symridge.profiles import (Profile1D, custom_sampled, finite_difference, fractional_laplacian,
                               gaussian, gaussian_deriv, identity, make_profile, numerical_spectrum, relu,
                               spectral_bump, step, tanh)

W = np.array([-3.0, -0.7, 0.0, 0.4, 1.9, 5.0])


def test_gaussian_spectrum_closed_form():
    g = gaussian(1.3)
    np.testing.assert_allclose(g.spectrum(W), numerical_spectrum(g, W), atol=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gaussian_derivative(k):
    p = gaussian_deriv(k, 1.4)
    np.testing.assert_allclose(p.spectrum(W), numerical_spectrum(p, W), atol=1e-11)
    # compare with a centered finite difference of order k-1
    t, h = 0.37, 1e-4
    q = gaussian_deriv(k - 1, 1.4)
    assert p(t) == pytest.approx((q(t + h) - q(t - h)) / (2 * h), rel=1e-6)


def test_tanh_spectrum_via_derivative():
    # sech^2 = tanh', so its spectrum is i w tanh#(w) = pi w / sinh(pi w / 2)
    sech2 = Profile1D("custom", {}, lambda t: 1 / np.cosh(t) ** 2)
    w = W[W != 0]
    np.testing.assert_allclose(1j * w * tanh().spectrum(w), numerical_spectrum(sech2, w), atol=1e-10)
    assert tanh().spectrum(np.array([0.0]))[0] == 0


def test_finite_difference_examples():
    s = gaussian()
    assert finite_difference(s, 0) is s
    assert finite_difference(relu(), 1, 1.0)(np.array(-0.5)) == pytest.approx(0.5)
    const = Profile1D("custom", {}, lambda t: np.full(np.shape(t), 3.0))
    np.testing.assert_array_equal(finite_difference(const, 1)(np.linspace(-2, 2, 7)), 0.0)


def test_relu_second_difference_is_hat():
    hat = finite_difference(relu(), 2, 1.0)
    t = np.array([-3.0, -2.0, -1.5, -1.0, -0.25, 0.0, 1.0])
    np.testing.assert_allclose(hat(t), [0, 0, 0.5, 1, 0.25, 0, 0], atol=1e-15)
    x1, w1 = gl_nodes(20, -2.0, -1.0)
    x2, w2 = gl_nodes(20, -1.0, 0.0)
    x, w = np.concatenate([x1, x2]), np.concatenate([w1, w2])
    ref = np.exp(-1j * np.multiply.outer(W, x)) @ (hat(x) * w)
    np.testing.assert_allclose(hat.spectrum(W), ref, atol=1e-12)
    assert hat.is_bounded_lipschitz


def test_step_first_difference_is_box():
    box = finite_difference(step(), 1, 1.0)
    x, w = gl_nodes(30, -1.0, 0.0)
    ref = np.exp(-1j * np.multiply.outer(W, x)) @ w
    np.testing.assert_allclose(box.spectrum(W), ref, atol=1e-12)


def test_hypothesis_flags():
    assert not relu().is_bounded_lipschitz
    assert not step().is_bounded_lipschitz
    assert not identity().is_bounded_lipschitz
    assert tanh().is_bounded_lipschitz
    assert finite_difference(step(), 1).is_bounded_lipschitz


def test_fractional_laplacian_r2_gaussian():
    p = fractional_laplacian(gaussian(), 2)
    b = np.array([0.0, 1.0, 2.0])
    np.testing.assert_allclose(p(b).real, (1 - b**2) * np.exp(-0.5 * b**2), atol=1e-6)


def test_fractional_laplacian_vanishes_at_zero():
    p = fractional_laplacian(gaussian(), 1.5)
    w = np.array([1e-3, 1e-4, 1e-5])
    np.testing.assert_allclose(p.spectrum(w) / w**1.5, gaussian().spectrum(w), rtol=1e-12)
    assert p.spectrum(np.array([0.0]))[0] == 0


def test_fractional_laplacian_rejects_bad_order():
    with pytest.raises(ConfigurationError):
        fractional_laplacian(gaussian(), 0.0)
    with pytest.raises(ConfigurationError):
        fractional_laplacian(relu(), 1.0)


def test_spectral_bump():
    p = spectral_bump(2.0, 4.0)
    assert np.all(p.spectrum(np.array([0.0, 1.9, 4.1, -1.0])) == 0)
    assert abs(p.spectrum(np.array([3.0]))[0]) > 0.9
    assert np.isrealobj(p(np.linspace(-3, 3, 5)))
    # inverse transform against adaptive quadrature of the even spectrum
    t = np.array([0.0, 0.123, 3.3, 17.7])
    ref = [integrate.quad(lambda w: p.spectrum(np.array([w]))[0].real * math.cos(tt * w), 2.0, 4.0,
                          epsabs=1e-14, limit=200)[0] / math.pi for tt in t]
    np.testing.assert_allclose(p(t), ref, atol=1e-8)


def test_custom_sampled_matches_gaussian():
    b = np.linspace(-12, 12, 2401)
    p = custom_sampled(b, np.exp(-0.5 * b**2))
    np.testing.assert_allclose(p.spectrum(W), gaussian().spectrum(W), atol=1e-10)
    assert p(np.array([0.3]))[0] == pytest.approx(math.exp(-0.045), rel=1e-9)
    with pytest.raises(ConfigurationError):
        custom_sampled([0.0, 1.0, 3.0, 4.0], [1, 2, 3, 4])


def test_shift_and_scale():
    g = gaussian()
    s = g.shift(0.8)
    assert s(np.array(0.8)) == pytest.approx(1.0)
    np.testing.assert_allclose(s.spectrum(W), np.exp(-0.8j * W) * g.spectrum(W))
    np.testing.assert_allclose(g.scaled(2.0).spectrum(W), 2 * g.spectrum(W))


def test_make_profile():
    p = make_profile({"kind": "gaussian_deriv", "k": 2, "scale": 0.5})
    assert p.params == {"k": 2, "scale": 0.5}
    q = make_profile({"kind": "relu", "finite_difference": {"k": 2, "theta": 0.5}})
    assert q.tag == "finite_difference" and q.is_bounded_lipschitz
    with pytest.raises(ConfigurationError):
        make_profile({"kind": "sigmoid"})
    with pytest.raises(ConfigurationError):
        make_profile({"kind": "gaussian", "width": 1.0})
