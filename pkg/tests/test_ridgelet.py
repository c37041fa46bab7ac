import csv
import math

import numpy as np
import pytest

from symridge.errors import ConfigurationError, DegeneratePairError
from symridge.fourier import hf_forward, lambda_field
from symridge.profiles import (fractional_laplacian, gaussian, gaussian_deriv, relu, spectral_bump,
                               tanh)
from symridge.ridgelet import (AtomicMeasure, DensityMeasure, bias_grid, network_apply, reconstruct,
                               ridgelet_grid, ridgelet_transform, scalar_product, scale_grid,
                               separation_of_variables_check, spectrum_interpolant,
                               write_ridgelet_csv)
from symridge.spaces import (QuadratureGrid, ball_grid, boundary_grid, euclidean_grid, frequency_grid,
                             space_descriptor)
from symridge.targets import radial_bump, zero

# R[f;rho](1.5, (1,0), 0.7) for the radial bump, rho = Delta^{1/2} of the 4th Gaussian
# derivative (scale 1.4); scipy adaptive quadrature of the filtered profile and the X-integral
NODE_ORACLE = 0.04640344690448402


def single(nodes):
    nodes = np.asarray(nodes, dtype=float)
    return QuadratureGrid(nodes, np.ones(len(nodes)), "nodes")


@pytest.fixture(scope="module")
def ball_setup():
    sp = space_descriptor("poincare_ball", 2)
    return sp, ball_grid(sp, 0.95, 64), radial_bump(0.6, 4.0), fractional_laplacian(gaussian_deriv(4, 1.4), 1)


def test_disjoint_supports_give_zero(ball):
    assert scalar_product(spectral_bump(0.0, 1.0), spectral_bump(2.0, 4.0), ball) == 0


def test_gaussian_pair_closed_form(ball):
    # (1/2 pi) int 2 pi |w| exp(-w^2) dw = 1
    v = scalar_product(gaussian(), fractional_laplacian(gaussian(), 2), ball)
    assert v == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("model,m", [("poincare_ball", 2), ("poincare_disk_su11", 2), ("spd", 2)])
def test_product_is_inner_product(model, m):
    sp = space_descriptor(model, m)
    s, r0 = 1.0, 1.4
    # int exp(-b^2/2) exp(-b^2/(2 r0^2)) db
    ref = sp.weyl_order * math.sqrt(2 * math.pi / (1 / s**2 + 1 / r0**2))
    v = scalar_product(gaussian(s), fractional_laplacian(gaussian(r0), sp.rank), sp)
    assert v == pytest.approx(ref, rel=1e-6)


def test_euclidean_prefactor(line):
    # m = 1: int sigma# conj(rho0#) dw = 2 pi int sigma rho0
    v = scalar_product(gaussian(), fractional_laplacian(gaussian(), 1), line)
    assert v == pytest.approx(2 * math.pi * math.sqrt(math.pi), rel=1e-6)


def test_divergent_pair(line):
    with pytest.raises(DegeneratePairError):
        scalar_product(tanh(), fractional_laplacian(gaussian(), 1), line)
    with pytest.raises(DegeneratePairError):
        scalar_product(relu(), gaussian(), line)


def test_network_zero_measure(ball):
    x = np.array([[0.1, 0.2], [0.5, 0.0]])
    empty = AtomicMeasure(np.zeros(0), np.zeros((0, 1)), np.zeros((0, 2)), np.zeros(0))
    assert np.all(network_apply(empty, tanh(), x, ball) == 0)
    atoms = AtomicMeasure(np.zeros(3), np.ones(3), np.tile([1.0, 0.0], (3, 1)), np.zeros(3))
    assert np.all(network_apply(atoms, tanh(), x, ball) == 0)


def test_single_atom(ball, disk):
    atom = AtomicMeasure([1.0], [[1.0]], [[1.0, 0.0]], [0.0])
    x = np.array([[0.5, 0.0]])
    # tanh(log 3) = 0.8 and exp(log(3)/2) on the ball
    assert network_apply(atom, tanh(), x, ball)[0] == pytest.approx(0.8 * math.sqrt(3), rel=1e-14)
    # disk: <x,u> = log(3)/2 and rho = 1
    assert network_apply(atom, tanh(), x, disk)[0] == pytest.approx(0.5 * math.sqrt(3), rel=1e-14)


def test_euclidean_atoms(line):
    atoms = AtomicMeasure([2.0, -1.0], [[0.5], [1.5]], [[0.0], [0.0]], [0.1, -0.3])
    x = np.array([[0.7], [-1.2]])
    ref = 2 * np.tanh(0.5 * x[:, 0] - 0.1) - np.tanh(1.5 * x[:, 0] + 0.3)
    np.testing.assert_allclose(network_apply(atoms, tanh(), x, line), ref, rtol=1e-14)


def test_atomic_vs_mollified_density(ball):
    # narrow normalized Gaussians in (a, b) around two atoms on one boundary node each
    u = np.array([[1.0, 0.0], [0.0, -1.0]])
    atoms = AtomicMeasure([1.0, -0.5], [[1.2], [0.8]], u, [0.3, -0.4])
    a_grid = scale_grid(1, 0.0, 2.0, 400)
    b_grid = bias_grid(1.0, 401)
    eps = 0.01
    ag, bg = a_grid.nodes[:, 0], b_grid.nodes
    vals = np.zeros((len(ag), 2, len(bg)))
    for j in range(2):
        ga = np.exp(-0.5 * ((ag - atoms.a[j, 0]) / eps) ** 2)
        gb = np.exp(-0.5 * ((bg - atoms.b[j]) / eps) ** 2)
        ga /= ga @ a_grid.weights
        gb /= gb @ b_grid.weights
        vals[:, j, :] = atoms.c[j].real * np.multiply.outer(ga, gb)
    dens = DensityMeasure(vals, a_grid, single(u), b_grid)
    x = np.array([[0.2, 0.1], [-0.4, 0.3], [0.0, -0.6]])
    exact = network_apply(atoms, tanh(), x, ball)
    approx = network_apply(dens, tanh(), x, ball)
    assert np.max(np.abs(approx - exact)) <= 0.01 * np.max(np.abs(exact))


def test_network_dimension_mismatch(ball):
    atom = AtomicMeasure([1.0], [[1.0]], [[1.0, 0.0]], [0.0])
    with pytest.raises(ConfigurationError):
        network_apply(atom, tanh(), np.zeros((2, 3)), ball)
    bad = AtomicMeasure([1.0], [[1.0, 2.0]], [[1.0, 0.0]], [0.0])
    with pytest.raises(ConfigurationError):
        network_apply(bad, tanh(), np.zeros((2, 2)), ball)


def test_ridgelet_of_zero(ball_setup):
    sp, xg, _, rho = ball_setup
    assert np.all(ridgelet_transform(zero(), rho, [[1.0]], [[1.0, 0.0]], [0.0, 1.0], sp, xg) == 0)


def test_node_value_against_oracle(ball_setup):
    sp, xg, f, rho = ball_setup
    v = ridgelet_transform(f, rho, [[1.5]], [[1.0, 0.0]], [0.7], sp, xg)[0]
    assert v.real == pytest.approx(NODE_ORACLE, rel=1e-3)
    d = ridgelet_grid(f, rho, sp, single([[1.5]]), single([[1.0, 0.0]]), single([0.7]), xg)
    assert d.values[0, 0, 0].real == pytest.approx(NODE_ORACLE, rel=1e-3)


def test_lambda_cache_route(ball_setup):
    sp, xg, f, rho = ball_setup
    F = hf_forward(f, sp, frequency_grid(sp, 20.0, 128), boundary_grid(sp, 128), xg)
    cache = lambda_field(F, xg)
    v = ridgelet_transform(f, rho, [[1.5]], [[1.0, 0.0]], [0.7], sp, xg, method="lambda_cache",
                           cache=cache)[0]
    assert v.real == pytest.approx(NODE_ORACLE, rel=1e-2)
    with pytest.raises(ConfigurationError):
        ridgelet_transform(f, rho, [[1.5]], [[1.0, 0.0]], [0.7], sp, xg, method="lambda_cache")


def test_bias_covariance(ball_setup):
    sp, xg, f, rho = ball_setup
    c = 0.6
    bnd = boundary_grid(sp, 4)
    a_grid = single([[0.7], [2.0]])
    spec = spectrum_interpolant(f, sp, bnd, xg, 30.0, 128)
    b = np.linspace(-2, 2, 9)
    shifted = ridgelet_grid(f, rho.shift(c), sp, a_grid, bnd, single(b), xg, spectrum=spec)
    moved = ridgelet_grid(f, rho, sp, a_grid, bnd, single(b + c), xg, spectrum=spec)
    scale = np.max(np.abs(moved.values))
    assert np.max(np.abs(shifted.values - moved.values)) <= 1e-10 * scale


def test_bias_covariance_filtered(ball_setup):
    sp, xg, f, rho = ball_setup
    c = 0.6
    b = np.array([-1.0, 0.25, 1.5])
    u = [[0.0, 1.0]]
    lhs = ridgelet_transform(f, rho.shift(c), [[1.3]], u, b, sp, xg)
    rhs = ridgelet_transform(f, rho, [[1.3]], u, b + c, sp, xg)
    assert np.max(np.abs(lhs - rhs)) <= 1e-8 * np.max(np.abs(rhs))


def test_cached_spectrum_must_match_boundary(ball_setup):
    sp, xg, f, rho = ball_setup
    spec = spectrum_interpolant(f, sp, boundary_grid(sp, 4), xg, 10.0, 32)
    with pytest.raises(ConfigurationError):
        ridgelet_grid(f, rho, sp, single([[1.0]]), boundary_grid(sp, 8), single([0.0]), xg, spectrum=spec)


def test_reconstruct_zero_and_degenerate(ball_setup):
    sp, _, _, rho = ball_setup
    xg = ball_grid(sp, 0.95, 16)
    bnd = boundary_grid(sp, 8)
    rec = reconstruct(zero(), gaussian(), rho, sp, xg, bnd, scale_grid(1, 0, 4, 16), bias_grid(6, 32),
                      n_cheb=32)
    assert np.all(rec(np.array([[0.1, 0.2], [0.0, 0.0]])) == 0)
    with pytest.raises(DegeneratePairError):
        reconstruct(zero(), spectral_bump(0.0, 1.0), spectral_bump(2.0, 4.0), sp, xg, bnd)


def test_separation_of_variables_zero(ball_setup, line):
    sp, xg, _, rho = ball_setup
    nodes = [(1.0, np.array([1.0, 0.0]))]
    assert separation_of_variables_check(zero(), rho, sp, nodes, [0.5, 1.0], xg) == 0.0
    xe = euclidean_grid(1, 8.0, 64)
    assert separation_of_variables_check(zero(), rho, line, [(1.0, np.zeros(1))], [1.0], xe) == 0.0


def test_density_shape_checked():
    with pytest.raises(ConfigurationError):
        DensityMeasure(np.zeros((2, 2, 2)), single([[1.0]]), single([[1.0, 0.0]]), single([0.0]))


def test_write_ridgelet_csv(tmp_path):
    d = DensityMeasure(np.full((1, 1, 2), 1 - 2j), single([[1.0]]), single([[1.0, 0.0]]),
                       single([0.0, 0.5]))
    path = tmp_path / "r.csv"
    write_ridgelet_csv(d, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["a_1", "u_1", "u_2", "b", "re", "im"]
    assert rows[2] == ["1.0", "1.0", "0.0", "0.5", "1.0", "-2.0"]
