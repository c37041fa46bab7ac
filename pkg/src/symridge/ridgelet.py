"""Scalar product, continuous networks and ridgelet transforms.

Conventions (rank ``r``, Weyl order ``|W|``, inversion constant ``C``,
Plancherel density ``P``):

* network   ``S[g](x) = int g(a,u,b) sigma(a.<x,u> - b) exp(rho.<x,u>) da du db``
* ridgelet  ``R[f;rho](a,u,b) = int Lf(x) conj(rho(a.<x,u> - b)) exp(rho.<x,u>) dx``
  where ``Lf`` has spectrum ``|W| C P(lam) f^(lam,u)``
* product   ``<<sigma,rho>> = (|W|/2pi) int sigma#(w) conj(rho#(w)) |w|^-r dw``

so that ``S[R[f;rho]] = <<sigma,rho>> f``.  The Euclidean model uses
``R[f;rho](a,b) = int f(x) conj(rho(a.x - b)) dx`` and the prefactor
``(2 pi)^{m-1}`` with weight ``|w|^-m``.

Three routes compute ``R``:

``filtered``
    X-quadrature with the filtered profile ``rho_a`` whose spectrum is
    ``|W| C P(w a) rho#(w)``; the multiplier moves from ``f`` onto ``rho``
    because it is real and even.
``lambda_cache``
    X-quadrature against a precomputed ``Lambda[f]`` (:class:`LambdaCache`).
``spectral``
    ``R = (1/2pi) int |W| C f^(w a, u) P(w a) conj(rho#(w)) e^{i w b} dw``
    with ``f^`` interpolated from Chebyshev samples; used for full grids.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from ._numerics import chebyshev_lobatto, chunked_map, gl_nodes, pairwise_sum
from .errors import ConfigurationError, DegeneratePairError
from .fourier import LambdaCache, ScalarField, euclidean_fourier, hf_forward_at
from .profiles import Profile1D, from_spectrum
from .spaces import QuadratureGrid, SpaceDescriptor

__all__ = [
    "scalar_product",
    "scale_grid",
    "bias_grid",
    "DensityMeasure",
    "AtomicMeasure",
    "network_apply",
    "filtered_profile",
    "ridgelet_transform",
    "ridgelet_grid",
    "spectrum_interpolant",
    "Reconstruction",
    "reconstruct",
    "separation_of_variables_check",
    "write_ridgelet_csv",
]


# ---------------------------------------------------------------------------
# scalar product


def _weight_power(space: SpaceDescriptor):
    if space.is_euclidean:
        return space.dimension, (2 * math.pi) ** (space.dimension - 1)
    return space.rank, space.weyl_order / (2 * math.pi)


def _panel_rule(edges, order=16):
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gl_nodes(order, lo, hi)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def scalar_product(sigma: Profile1D, rho: Profile1D, space: SpaceDescriptor,
                   omega_max: float | None = None, return_abs: bool = False):
    """``<<sigma, rho>>`` by composite Gauss-Legendre quadrature.

    Dyadic panels resolve the neighbourhood of ``w = 0`` down to ``2^-60``.
    The integral is declared divergent when the dyadic shell contributions
    near zero stop decaying; a :class:`DegeneratePairError` is raised.

    Returns
    -------
    complex, or (complex, float) with the absolute integral when
    ``return_abs`` is set.
    """
    r, pref = _weight_power(space)
    if not (sigma.has_spectrum and rho.has_spectrum):
        raise DegeneratePairError(
            f"pair ({sigma.tag}, {rho.tag}) has no regular spectrum; apply finite_difference first")
    bands = [b for b in (sigma.bandwidth, rho.bandwidth, omega_max) if b is not None]
    if not bands:
        raise ConfigurationError("cannot infer a frequency cutoff for the scalar product")
    wmax = min(bands)
    dyadic = 2.0 ** -np.arange(60, -1, -1)
    upper = np.arange(1.0, wmax + 0.5, 0.5)
    edges = np.unique(np.concatenate([dyadic, upper, [wmax]]))
    edges = edges[edges <= wmax]
    x, w = _panel_rule(edges)

    def integrand(om):
        return sigma.spectrum(om) * np.conj(rho.spectrum(om)) * np.abs(om) ** (-float(r))

    gp, gm = integrand(x), integrand(-x)
    absval = float(pref * np.sum(w * (np.abs(gp) + np.abs(gm))))
    # dyadic shells [2^-k-1, 2^-k] for k = 59 and 49
    shell = lambda k: np.sum(((x >= 2.0 ** (-k - 1)) & (x <= 2.0 ** (-k))) * w * (np.abs(gp) + np.abs(gm)))
    s_far, s_near = shell(49), shell(59)
    if s_near * pref > 1e-12 * max(absval, 1e-300) and s_near > 0.9 * s_far:
        raise DegeneratePairError(
            f"<<{sigma.tag},{rho.tag}>> diverges at w = 0 (non-integrable singularity)")
    val = complex(pref * pairwise_sum(w * (gp + gm)))
    return (val, absval) if return_abs else val


def _checked_product(sigma, rho, space, tol=1e-8):
    val, absval = scalar_product(sigma, rho, space, return_abs=True)
    if abs(val) <= tol * absval or absval == 0:
        raise DegeneratePairError(f"<<{sigma.tag},{rho.tag}>> vanishes (|value| = {abs(val):.3e})")
    return val


# ---------------------------------------------------------------------------
# parameter grids and measures


def scale_grid(rank: int = 1, a_min: float = 0.0, a_max: float = 8.0, n: int = 128) -> QuadratureGrid:
    """Gauss-Legendre grid on ``[-a_max, a_max]^rank`` minus ``|a| < a_min``."""
    if a_max <= 0 or a_min < 0 or a_min >= a_max:
        raise ConfigurationError("need 0 <= a_min < a_max", field="a_min")
    if a_min == 0:
        x, w = gl_nodes(n, -a_max, a_max)
    else:
        xl, wl = gl_nodes(n // 2, -a_max, -a_min)
        xr, wr = gl_nodes(n - n // 2, a_min, a_max)
        x, w = np.concatenate([xl, xr]), np.concatenate([wl, wr])
    if rank == 1:
        return QuadratureGrid(x[:, None], w, "scale_gl")
    mesh = np.stack([g.ravel() for g in np.meshgrid(*([x] * rank), indexing="ij")], 1)
    wts = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * rank), indexing="ij")], 1), 1)
    keep = np.linalg.norm(mesh, axis=1) >= a_min
    return QuadratureGrid(mesh[keep], wts[keep], "scale_gl_tensor")


def bias_grid(b_max: float = 12.0, n: int = 256) -> QuadratureGrid:
    """Uniform trapezoid grid with ``n`` nodes on ``[-b_max, b_max]``."""
    if b_max <= 0 or n < 2:
        raise ConfigurationError("need b_max > 0 and n_bias >= 2", field="b_max")
    b = np.linspace(-b_max, b_max, n)
    w = np.full(n, b[1] - b[0])
    w[[0, -1]] *= 0.5
    return QuadratureGrid(b, w, "bias_trapezoid")


@dataclass(frozen=True)
class DensityMeasure:
    """Density ``g(a,u,b)`` sampled on a product grid, shape ``(n_a, n_u, n_b)``."""

    values: np.ndarray
    a_grid: QuadratureGrid
    boundary_grid: QuadratureGrid
    b_grid: QuadratureGrid
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (len(self.a_grid), len(self.boundary_grid), len(self.b_grid)):
            raise ConfigurationError("density shape does not match its grids")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func, a_grid, boundary_grid, b_grid):
        """Sample ``func(a, u_index, b)`` (broadcast arrays) on the grids."""
        a = a_grid.nodes[:, None, None, :]
        ui = np.arange(len(boundary_grid))[None, :, None]
        b = b_grid.nodes[None, None, :]
        return cls(func(a, ui, b), a_grid, boundary_grid, b_grid)

    def weighted(self):
        return (self.values * self.a_grid.weights[:, None, None]
                * self.boundary_grid.weights[None, :, None] * self.b_grid.weights[None, None, :])

    def scaled(self, c):
        return DensityMeasure(self.values * c, self.a_grid, self.boundary_grid, self.b_grid, self.meta)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite measure ``sum_i c_i delta(a_i, u_i, b_i)``."""

    c: np.ndarray
    a: np.ndarray
    u: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex).ravel()
        a = np.asarray(self.a, dtype=float)
        if c.size:
            a = a.reshape(c.size, -1)
        else:
            a = a.reshape(0, a.shape[-1] if a.ndim > 1 else 1)
        b = np.asarray(self.b, dtype=float).ravel()
        u = np.asarray(self.u, dtype=float)
        if u.shape[0] != c.size or b.size != c.size:
            raise ConfigurationError("atom arrays must have equal length")
        for arr in (c, a, b, u):
            if not np.all(np.isfinite(arr)):
                raise ConfigurationError("atom parameters must be finite")
        for name, arr in (("c", c), ("a", a), ("u", u), ("b", b)):
            arr = np.array(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.c.size


def _check_points(space, x):
    x = np.asarray(x, dtype=float)
    shape = space.point_shape
    if x.shape[-len(shape):] != shape:
        raise ConfigurationError(f"points of shape {x.shape} do not match {space.tag}", field="x")
    return x.reshape((-1,) + shape)


def network_apply(gamma, sigma: Profile1D, x, space: SpaceDescriptor, chunk: int = 1) -> np.ndarray:
    """Evaluate the continuous (density) or finite (atomic) network at ``x``."""
    x = _check_points(space, x)
    rho = space.rho_h
    r = space.rank
    if isinstance(gamma, AtomicMeasure):
        if gamma.a.shape[1] != r:
            raise ConfigurationError("atom scale vectors must have length rank", field="a")
        if len(gamma) == 0:
            return np.zeros(x.shape[0], dtype=complex)
        uniq, inv = np.unique(gamma.u.reshape(len(gamma), -1), axis=0, return_inverse=True)
        inv = inv.ravel()
        u_shape = gamma.u.shape[1:]
        uniq = uniq.reshape((-1,) + u_shape)

        def block(s, e):
            h = space.composite_distance(x[s:e], uniq)[:, inv, :]  # (n, atoms, r)
            t = np.einsum("nir,ir->ni", h, gamma.a)
            wexp = np.exp(h @ rho)
            return (sigma(t - gamma.b[None, :]) * wexp) @ gamma.c

        return np.concatenate(chunked_map(block, x.shape[0], max(chunk, 16)))
    if isinstance(gamma, DensityMeasure):
        if gamma.a_grid.nodes.shape[1] != r:
            raise ConfigurationError("density scale grid must have rank columns", field="a_grid")
        gw = np.transpose(gamma.weighted(), (1, 0, 2))  # (u, a, b)
        a = gamma.a_grid.nodes
        b = gamma.b_grid.nodes

        def block(s, e):
            h = space.composite_distance(x[s:e], gamma.boundary_grid.nodes)  # (n, u, r)
            out = np.empty(e - s, dtype=complex)
            for i in range(e - s):
                t = h[i] @ a.T  # (u, a)
                vals = sigma(t[:, :, None] - b[None, None, :])
                per_u = np.sum((vals * gw).reshape(gw.shape[0], -1), axis=1)
                out[i] = np.sum(per_u * np.exp(h[i] @ rho))
            return out

        return np.concatenate(chunked_map(block, x.shape[0], chunk))
    raise ConfigurationError("gamma must be a DensityMeasure or AtomicMeasure")


# ---------------------------------------------------------------------------
# ridgelet transform


def _inv_const(space, inversion_constant):
    C = space.inversion_constant if inversion_constant is None else inversion_constant
    if C is None:
        raise ConfigurationError("inversion constant is not available", field="inversion_constant")
    return C


def filtered_profile(rho: Profile1D, a, space: SpaceDescriptor, inversion_constant=None) -> Profile1D:
    """``rho_a`` with spectrum ``|W| C P(w a) rho#(w)``."""
    a = np.asarray(a, dtype=float).ravel()
    K = space.weyl_order * _inv_const(space, inversion_constant)

    def sp(w):
        w = np.asarray(w, dtype=float)
        lam = np.multiply.outer(w.ravel(), a)
        return (K * space.plancherel(lam).reshape(w.shape)) * rho.spectrum(w)

    return from_spectrum(sp, "filtered", {"a": a.tolist()}, base=rho, omega_max=rho.bandwidth)


def _as_nodes(space, a, u, b):
    a = np.asarray(a, dtype=float).reshape(-1, space.rank)
    b = np.asarray(b, dtype=float).ravel()
    bshape = (space.dimension, space.dimension) if space.is_spd else (space.dimension,)
    u = np.asarray(u, dtype=float).reshape((-1,) + bshape)
    n = max(a.shape[0], b.size, u.shape[0])
    a = np.broadcast_to(a, (n, space.rank)) if a.shape[0] == 1 else a
    b = np.broadcast_to(b, (n,)) if b.size == 1 else b
    u = np.broadcast_to(u, (n,) + bshape) if u.shape[0] == 1 else u
    if not (a.shape[0] == b.size == u.shape[0]):
        raise ConfigurationError("node arrays must have equal length or length one")
    return a, u, b


def ridgelet_transform(f, rho: Profile1D, a, u, b, space: SpaceDescriptor, x_grid: QuadratureGrid,
                       method: str = "filtered", cache: LambdaCache | None = None,
                       inversion_constant=None) -> np.ndarray:
    """``R[f;rho]`` at the nodes ``(a_i, u_i, b_i)`` by X-quadrature.

    Parameters
    ----------
    method : {"filtered", "lambda_cache"}
        ``lambda_cache`` requires ``cache`` built by
        :func:`symridge.fourier.lambda_field` on ``x_grid``.
    """
    a, u, b = _as_nodes(space, a, u, b)
    fx = np.asarray(f(x_grid.nodes), dtype=complex)
    if space.is_euclidean:
        g = fx * x_grid.weights
        xs = x_grid.nodes
        return np.array([g @ np.conj(rho(xs @ a[i] - b[i])) for i in range(a.shape[0])])
    if method == "lambda_cache":
        if cache is None:
            raise ConfigurationError("lambda_cache route needs a precomputed Lambda[f] cache", field="cache")
        if cache.x_grid is not x_grid and cache.x_grid.nodes.shape != x_grid.nodes.shape:
            raise ConfigurationError("Lambda[f] cache lives on a different X-grid", field="cache")
        K = space.weyl_order * _inv_const(space, inversion_constant)
        g = K * cache.values * x_grid.weights
    elif method == "filtered":
        g = fx * x_grid.weights
    else:
        raise ConfigurationError(f"unknown ridgelet route {method!r}", field="method")
    rho_h = space.rho_h
    out = np.empty(a.shape[0], dtype=complex)
    uniq_a, inv_a = np.unique(a, axis=0, return_inverse=True)
    inv_a = inv_a.ravel()
    for ia, av in enumerate(uniq_a):
        kern = rho if method == "lambda_cache" else filtered_profile(rho, av, space, inversion_constant)
        idx = np.nonzero(inv_a == ia)[0]
        h = space.composite_distance(x_grid.nodes, u[idx])  # (n_x, n_idx, r)
        t = h @ av
        wexp = np.exp(h @ rho_h)
        vals = np.conj(kern(t - b[idx][None, :])) * wexp
        out[idx] = g @ vals
    return out


class _ChebSpectrum:
    """Chebyshev interpolant of ``lam -> f^(lam, u)`` for all boundary nodes."""

    def __init__(self, f, space, boundary_grid, x_grid, lam_max, n):
        self.lam_max = float(lam_max)
        self.boundary_size = len(boundary_grid)
        nodes = chebyshev_lobatto(n, -lam_max, lam_max)
        vals = hf_forward_at(f, space, nodes[:, None], boundary_grid, x_grid)
        self.nodes = nodes
        self.values = vals
        # closed-form Lobatto weights; scipy would otherwise draw a random node order
        wi = (-1.0) ** np.arange(n)
        wi[[0, -1]] *= 0.5
        self.interp = BarycentricInterpolator(nodes, vals, wi=wi)
        P = space.plancherel(nodes[:, None])
        peak = np.max(np.abs(vals) * P[:, None])
        edge = np.max(np.abs(vals[[0, -1]]) * P[[0, -1], None])
        self.edge_ratio = float(edge / peak) if peak > 0 else 0.0

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float).ravel()
        out = np.zeros((lam.size, self.values.shape[1]), dtype=complex)
        inside = np.abs(lam) <= self.lam_max
        if np.any(inside):
            out[inside] = self.interp(lam[inside])
        return out


def spectrum_interpolant(f, space, boundary_grid, x_grid, lam_max: float = 40.0, n: int = 192):
    """Chebyshev interpolant of ``f^(., u)`` on ``[-lam_max, lam_max]``, zero outside."""
    return _ChebSpectrum(f, space, boundary_grid, x_grid, lam_max, n)


def _omega_rule(rho, n_omega):
    wmax = rho.bandwidth
    wl, ql = gl_nodes(n_omega, -wmax, 0.0)
    wr, qr = gl_nodes(n_omega, 0.0, wmax)
    return np.concatenate([wl, wr]), np.concatenate([ql, qr])


def ridgelet_grid(f, rho: Profile1D, space: SpaceDescriptor, a_grid: QuadratureGrid,
                  boundary_grid: QuadratureGrid, b_grid: QuadratureGrid, x_grid: QuadratureGrid,
                  lam_max: float = 40.0, n_cheb: int = 192, n_omega: int = 96,
                  inversion_constant=None, spectrum=None) -> DensityMeasure:
    """``R[f;rho]`` on the product grid ``a x u x b``.

    Euclidean: direct X-quadrature.  Rank-one hyperbolic: spectral route with
    Chebyshev-interpolated ``f^`` (pass ``spectrum`` from
    :func:`spectrum_interpolant` to reuse it).  The returned measure records
    the relative size of ``|f^| P`` at the Chebyshev cutoff in
    ``meta["edge_ratio"]``.
    """
    a = a_grid.nodes
    b = b_grid.nodes
    if space.is_euclidean:
        xs = x_grid.nodes
        g = np.asarray(f(xs), dtype=complex) * x_grid.weights
        t = xs @ a.T  # (n_x, n_a)

        def block(s, e):
            vals = np.conj(rho(t[:, s:e, None] - b[None, None, :]))
            return np.einsum("x,xab->ab", g, vals)[:, None, :]

        R = np.concatenate(chunked_map(block, a.shape[0], 8), axis=0)
        return DensityMeasure(R, a_grid, boundary_grid, b_grid, {"route": "x_quadrature"})
    if space.rank != 1:
        raise ConfigurationError("the grid route supports rank-one spaces only", field="space")
    K = space.weyl_order * _inv_const(space, inversion_constant)
    om, qw = _omega_rule(rho, n_omega)
    if spectrum is None:
        spectrum = spectrum_interpolant(f, space, boundary_grid, x_grid,
                                        min(lam_max, float(np.max(np.abs(a))) * om.max()), n_cheb)
    elif spectrum.boundary_size != len(boundary_grid):
        raise ConfigurationError("cached spectrum uses a different boundary grid", field="spectrum")
    spec = spectrum
    rho_c = np.conj(rho.spectrum(om)) * qw / (2 * math.pi)
    phase = np.exp(1j * np.multiply.outer(om, b))  # (n_w, n_b)

    def block(s, e):
        av = a[s:e, 0]
        lam = np.multiply.outer(av, om)  # (na, nw)
        fh = spec(lam).reshape(av.size, om.size, -1)  # (na, nw, nu)
        P = space.plancherel(lam.reshape(-1, 1)).reshape(lam.shape)
        G = K * fh * (P * rho_c[None, :])[:, :, None]
        return np.einsum("awu,wb->aub", G, phase)

    R = np.concatenate(chunked_map(block, a.shape[0], 8), axis=0)
    return DensityMeasure(R, a_grid, boundary_grid, b_grid,
                          {"route": "spectral", "edge_ratio": spec.edge_ratio})


# ---------------------------------------------------------------------------
# reconstruction


@dataclass(frozen=True)
class Reconstruction:
    """``x -> S[R[f;rho]](x) / <<sigma,rho>>``."""

    density: DensityMeasure
    sigma: Profile1D
    space: SpaceDescriptor
    product: complex

    def __call__(self, x):
        return network_apply(self.density, self.sigma, x, self.space) / self.product

    def as_field(self) -> ScalarField:
        return ScalarField(self.__call__, None, "reconstruction")


def default_parameter_grids(space, boundary, a_min=0.0, a_max=8.0, n_scale=128, b_max=12.0, n_bias=256):
    return scale_grid(space.rank, a_min, a_max, n_scale), boundary, bias_grid(b_max, n_bias)


def reconstruct(f, sigma: Profile1D, rho: Profile1D, space: SpaceDescriptor, x_grid: QuadratureGrid,
                boundary_grid: QuadratureGrid, a_grid: QuadratureGrid | None = None,
                b_grid: QuadratureGrid | None = None, **kw) -> Reconstruction:
    """Discretized ``S[R[f;rho]] / <<sigma,rho>>``.

    The scalar product is checked first; a vanishing or divergent value
    raises :class:`DegeneratePairError`.
    """
    prod = _checked_product(sigma, rho, space)
    a_grid = a_grid or scale_grid(space.rank)
    b_grid = b_grid or bias_grid()
    dens = ridgelet_grid(f, rho, space, a_grid, boundary_grid, b_grid, x_grid, **kw)
    return Reconstruction(dens, sigma, space, prod)


def separation_of_variables_check(f, rho: Profile1D, space: SpaceDescriptor, nodes, omegas,
                                  x_grid: QuadratureGrid, b_grid: QuadratureGrid | None = None,
                                  inversion_constant=None) -> float:
    """Compare the bias spectrum of ``R`` with the separated form.

    For each ``(a, u)`` in ``nodes``, ``R[f;rho](a,u,.)`` is computed on a
    bias grid by the filtered X-route and transformed in ``b`` by the
    trapezoid rule; it is compared at ``omegas`` with
    ``|W| C f^(w a, u) P(w a) conj(rho#(w))`` (Euclidean:
    ``f^(w a) conj(rho#(w))``).  Returns the largest deviation relative to
    the largest reference value at each node.
    """
    b_grid = b_grid or bias_grid()
    b = b_grid.nodes
    om = np.asarray(omegas, dtype=float)
    worst = 0.0
    for a, u in nodes:
        a = np.asarray(a, dtype=float).reshape(space.rank)
        R = ridgelet_transform(f, rho, a[None], u, b, space, x_grid,
                               inversion_constant=inversion_constant)
        lhs = np.exp(-1j * np.multiply.outer(om, b)) @ (R * b_grid.weights)
        lam = np.multiply.outer(om, a)
        if space.is_euclidean:
            fh = euclidean_fourier(f, x_grid, lam)
            rhs = fh * np.conj(rho.spectrum(om))
        else:
            K = space.weyl_order * _inv_const(space, inversion_constant)
            bnd = QuadratureGrid(np.asarray(u, dtype=float)[None], np.ones(1), "single", True)
            fh = hf_forward_at(f, space, lam, bnd, x_grid)[:, 0]
            rhs = K * fh * space.plancherel(lam) * np.conj(rho.spectrum(om))
        scale = np.max(np.abs(rhs))
        if scale == 0:
            dev = float(np.max(np.abs(lhs)))
        else:
            dev = float(np.max(np.abs(lhs - rhs)) / scale)
        worst = max(worst, dev)
    return worst


def write_ridgelet_csv(dens: DensityMeasure, path) -> None:
    """Dump a sampled ridgelet transform: a_1..a_r, boundary coords, b, re, im."""
    a = dens.a_grid.nodes
    u = np.asarray(dens.boundary_grid.nodes).reshape(len(dens.boundary_grid), -1)
    b = dens.b_grid.nodes
    head = [f"a_{i + 1}" for i in range(a.shape[1])] + [f"u_{j + 1}" for j in range(u.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(head + ["b", "re", "im"])
        for i in range(a.shape[0]):
            for j in range(u.shape[0]):
                for k in range(b.size):
                    v = dens.values[i, j, k]
                    w.writerow([repr(float(t)) for t in a[i]] + [repr(float(t)) for t in u[j]]
                               + [repr(float(b[k])), repr(float(v.real)), repr(float(v.imag))])
