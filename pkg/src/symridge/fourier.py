"""Helgason-Fourier transform by quadrature.

The forward transform is

    F(lam, u) = sum_x w_x f(x) exp((-i lam + rho) . <x,u>)

over an X-grid whose weights already contain the volume density, and the
inverse is

    f(x) = C sum_{lam,u} w_lam w_u P(lam) F(lam,u) exp((i lam + rho) . <x,u>)

with ``C`` the model's inversion constant and ``P`` its Plancherel density.
For the Euclidean model the same formulas reduce to the ordinary Fourier
pair (``rho = 0``, ``P = 1``, ``C = (2 pi)^-m``).  For SPD the frequency is
paired with ``<x,u>`` through :func:`symridge.spd.power_map`.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._numerics import chunked_map, pairwise_sum
from .errors import ConfigurationError
from .spaces import QuadratureGrid, SpaceDescriptor

__all__ = [
    "ScalarField",
    "SpectralFunction",
    "hf_forward",
    "hf_forward_at",
    "hf_inverse",
    "plancherel_check",
    "lambda_multiplier",
    "lambda_field",
    "LambdaCache",
    "euclidean_fourier",
    "euclidean_inverse",
    "calibrate_spd_constant",
    "spd_gaussian",
    "write_spectrum_csv",
]


@dataclass(frozen=True)
class ScalarField:
    """A function on the active space, vectorized over the first axis."""

    func: Callable
    support_radius: float | None = None
    name: str = "f"

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def __add__(self, other):
        return ScalarField(lambda x: self(x) + other(x), _max_support(self, other), "sum")

    def scale(self, c):
        return ScalarField(lambda x: c * self(x), self.support_radius, f"{c}*{self.name}")


def _max_support(a, b):
    if a.support_radius is None or b.support_radius is None:
        return None
    return max(a.support_radius, b.support_radius)


@dataclass(frozen=True)
class SpectralFunction:
    """Sampled transform ``F[lam, u]`` on a frequency x boundary grid."""

    values: np.ndarray
    freq_grid: QuadratureGrid
    boundary_grid: QuadratureGrid
    space: SpaceDescriptor
    inversion_constant: float | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (len(self.freq_grid), len(self.boundary_grid)):
            raise ConfigurationError("spectrum shape does not match its grids")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.inversion_constant is None and self.space.inversion_constant is not None:
            object.__setattr__(self, "inversion_constant", self.space.inversion_constant)

    def replace_values(self, values):
        return SpectralFunction(values, self.freq_grid, self.boundary_grid, self.space,
                                self.inversion_constant)

    def __add__(self, other):
        return self.replace_values(self.values + other.values)

    def __mul__(self, c):
        return self.replace_values(self.values * c)

    __rmul__ = __mul__


def _pair_coords(space: SpaceDescriptor, h):
    """Coordinates ``q`` with ``lam . q`` the phase of the kernel."""
    if space.is_spd:
        from .spd import power_map

        m = space.dimension
        t = power_map(np.eye(m))  # row i is T e_i
        return h @ t.T
    return h


def _check_grids(space, freq_grid, boundary_grid, x_grid=None):
    if freq_grid.nodes.reshape(len(freq_grid), -1).shape[1] != space.rank:
        raise ConfigurationError("frequency grid rank does not match the space", field="freq_grid")
    bshape = np.asarray(boundary_grid.nodes).shape[1:]
    if space.is_spd:
        ok = bshape == (space.dimension, space.dimension)
    else:
        ok = bshape == (space.dimension,)
    if not ok:
        raise ConfigurationError("boundary grid does not match the space", field="boundary_grid")
    if x_grid is not None and tuple(np.asarray(x_grid.nodes).shape[1:]) != space.point_shape:
        raise ConfigurationError("X-grid does not match the space", field="x_grid")


def _tensor_factors(freq_grid, lam):
    """Per-axis node arrays of a rank-2 tensor frequency grid, else ``None``."""
    meta = freq_grid.meta
    if meta.get("rank") == 2 and lam is freq_grid.nodes:
        x = meta["factor_nodes"]
        return x, x
    return None


def hf_forward_at(f, space: SpaceDescriptor, lam, boundary_grid: QuadratureGrid,
                  x_grid: QuadratureGrid, tensor=None) -> np.ndarray:
    """Forward transform at arbitrary frequencies ``lam`` (shape ``(n, rank)``).

    Returns an array of shape ``(n, n_u)``.
    """
    lam = np.asarray(lam, dtype=float).reshape(-1, space.rank)
    fx = f(x_grid.nodes) if callable(f) else np.asarray(f)
    g = np.asarray(fx, dtype=complex) * x_grid.weights
    h = space.composite_distance(x_grid.nodes, boundary_grid.nodes)
    rho = space.rho_h
    n_u = h.shape[1]

    def one(s, e):
        cols = []
        for j in range(s, e):
            hj = h[:, j, :]
            amp = g * np.exp(hj @ rho)
            q = _pair_coords(space, hj)
            if tensor is not None:
                x1, x2 = tensor
                e1 = np.exp(-1j * np.multiply.outer(x1, q[:, 0])) * amp
                e2 = np.exp(-1j * np.multiply.outer(x2, q[:, 1]))
                cols.append((e1 @ e2.T).ravel())
            else:
                cols.append(np.exp(-1j * (lam @ q.T)) @ amp)
        return np.stack(cols, axis=1)

    parts = chunked_map(one, n_u, 4)
    return np.concatenate(parts, axis=1)


def hf_forward(f, space: SpaceDescriptor, freq_grid: QuadratureGrid,
               boundary_grid: QuadratureGrid, x_grid: QuadratureGrid,
               inversion_constant: float | None = None) -> SpectralFunction:
    """Helgason-Fourier transform of ``f`` sampled on the product grid.

    Parameters
    ----------
    f : ScalarField or callable
        Must be negligible outside the X-grid.
    x_grid : QuadratureGrid
        Quadrature on X whose weights include the volume density.
    """
    _check_grids(space, freq_grid, boundary_grid, x_grid)
    lam = freq_grid.nodes
    tensor = _tensor_factors(freq_grid, lam)
    vals = hf_forward_at(f, space, lam, boundary_grid, x_grid, tensor=tensor)
    return SpectralFunction(vals, freq_grid, boundary_grid, space, inversion_constant)


def hf_inverse(F: SpectralFunction, x, chunk: int = 256) -> np.ndarray:
    """Inverse transform evaluated at points ``x`` (first axis = points)."""
    space = F.space
    C = F.inversion_constant
    if C is None:
        raise ConfigurationError("inversion constant is not available", field="inversion_constant")
    x = np.asarray(x, dtype=float).reshape((-1,) + space.point_shape)
    lam = F.freq_grid.nodes
    coef = F.values * (C * F.freq_grid.weights * space.plancherel(lam))[:, None]
    wu = F.boundary_grid.weights
    rho = space.rho_h
    tensor = _tensor_factors(F.freq_grid, lam)
    n_u = len(F.boundary_grid)

    def block(s, e):
        xs = x[s:e]
        h = space.composite_distance(xs, F.boundary_grid.nodes)
        terms = []
        for j in range(n_u):
            hj = h[:, j, :]
            q = _pair_coords(space, hj)
            if tensor is not None:
                x1, x2 = tensor
                g = coef[:, j].reshape(len(x1), len(x2))
                e1 = np.exp(1j * np.multiply.outer(q[:, 0], x1))
                e2 = np.exp(1j * np.multiply.outer(q[:, 1], x2))
                val = np.sum((e1 @ g) * e2, axis=1)
            else:
                val = np.exp(1j * (q @ lam.T)) @ coef[:, j]
            terms.append(wu[j] * np.exp(hj @ rho) * val)
        return pairwise_sum(np.stack(terms), axis=0)

    return np.concatenate(chunked_map(block, x.shape[0], chunk))


def plancherel_check(f, space, freq_grid, boundary_grid, x_grid, F=None,
                     inversion_constant=None):
    """Both sides of the Plancherel identity by quadrature.

    Returns
    -------
    lhs : float
        ``int |f|^2 dx``.
    rhs : float
        ``C int |F|^2 P(lam) dlam du``.
    """
    fx = np.asarray(f(x_grid.nodes), dtype=complex)
    lhs = float(x_grid.integrate(np.abs(fx) ** 2))
    if F is None:
        F = hf_forward(f, space, freq_grid, boundary_grid, x_grid, inversion_constant)
    C = F.inversion_constant
    if C is None:
        raise ConfigurationError("inversion constant is not available", field="inversion_constant")
    dens = np.abs(F.values) ** 2 * space.plancherel(freq_grid.nodes)[:, None]
    inner = pairwise_sum(dens * boundary_grid.weights[None, :], axis=1)
    rhs = float(C * freq_grid.integrate(inner))
    return lhs, rhs


def lambda_multiplier(F: SpectralFunction) -> SpectralFunction:
    """Multiply the spectrum by the Plancherel density."""
    dens = F.space.plancherel(F.freq_grid.nodes)
    return F.replace_values(F.values * dens[:, None])


@dataclass(frozen=True)
class LambdaCache:
    """``Lambda[f]`` sampled on an X-grid.

    ``values`` equals ``hf_inverse(lambda_multiplier(F))`` at the grid nodes;
    the constant part ``|W| C`` of the multiplier is applied by the consumer.
    """

    values: np.ndarray
    x_grid: QuadratureGrid
    space: SpaceDescriptor
    meta: dict = field(default_factory=dict, compare=False)


def lambda_field(F: SpectralFunction, x_grid: QuadratureGrid) -> LambdaCache:
    """Evaluate ``Lambda[f]`` on ``x_grid`` from the spectrum ``F`` of ``f``."""
    vals = hf_inverse(lambda_multiplier(F), x_grid.nodes)
    vals.setflags(write=False)
    return LambdaCache(vals, x_grid, F.space)


def euclidean_fourier(f, x_grid: QuadratureGrid, omega) -> np.ndarray:
    """``int f(x) exp(-i x . omega) dx`` at frequencies ``omega`` (n, m)."""
    x = np.asarray(x_grid.nodes, dtype=float)
    m = x.shape[1]
    omega = np.asarray(omega, dtype=float).reshape(-1, m)
    g = np.asarray(f(x), dtype=complex) * x_grid.weights

    def block(s, e):
        return np.exp(-1j * (omega[s:e] @ x.T)) @ g

    return np.concatenate(chunked_map(block, omega.shape[0], 512))


def euclidean_inverse(F_values, omega_grid: QuadratureGrid, x) -> np.ndarray:
    """``(2 pi)^-m int F(omega) exp(i x . omega) domega`` at points ``x``."""
    om = np.asarray(omega_grid.nodes, dtype=float)
    m = om.shape[1]
    x = np.asarray(x, dtype=float).reshape(-1, m)
    coef = np.asarray(F_values, dtype=complex) * omega_grid.weights / (2 * np.pi) ** m

    def block(s, e):
        return np.exp(1j * (x[s:e] @ om.T)) @ coef

    return np.concatenate(chunked_map(block, x.shape[0], 512))


def calibrate_spd_constant(space, freq_grid, boundary_grid, x_grid, width: float = 0.6):
    """Inversion constant of SPD(m) fixed by a one-point condition.

    The reference function is ``exp(-|log x|_F^2 / (2 width^2))``; the
    constant is chosen so that the inverse transform of its spectrum
    reproduces its value 1 at the origin.  Used to cross-check
    :func:`symridge.spd.omega_constant` on a given set of grids.
    """
    if not space.is_spd:
        raise ConfigurationError("calibration applies to the SPD model only")
    ref = spd_gaussian(width)
    F = hf_forward(ref, space, freq_grid, boundary_grid, x_grid, inversion_constant=1.0)
    val = hf_inverse(F, space.origin()[None])[0]
    return float(1.0 / val.real)


def spd_gaussian(width: float = 0.6) -> ScalarField:
    """K-invariant Gaussian ``exp(-|log x|_F^2 / (2 width^2))`` on SPD."""

    def f(x):
        ev = np.linalg.eigvalsh(x)
        return np.exp(-np.sum(np.log(ev) ** 2, axis=-1) / (2 * width**2))

    return ScalarField(f, None, f"spd_gaussian({width})")


def write_spectrum_csv(F: SpectralFunction, path) -> None:
    """Dump a spectrum: columns lambda_1..lambda_r, boundary coords, re, im."""
    lam = F.freq_grid.nodes.reshape(len(F.freq_grid), -1)
    bnd = np.asarray(F.boundary_grid.nodes).reshape(len(F.boundary_grid), -1)
    r = lam.shape[1]
    head = [f"lambda_{i + 1}" for i in range(r)] + [f"u_{j + 1}" for j in range(bnd.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(head + ["re", "im"])
        for i in range(lam.shape[0]):
            for j in range(bnd.shape[0]):
                v = F.values[i, j]
                w.writerow([repr(float(t)) for t in lam[i]] + [repr(float(t)) for t in bnd[j]]
                           + [repr(float(v.real)), repr(float(v.imag))])
