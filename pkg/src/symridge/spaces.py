"""Space descriptors, points and quadrature grids.

Four models are available:

``euclidean``
    R^m viewed as a flat symmetric space.  The scale parameter is the full
    vector ``a`` in R^m, so the rank equals ``m``, the boundary is a single
    trivial point and the "composite distance" of ``x`` is ``x`` itself.
``poincare_ball``
    Unit ball with metric factor ``2/(1-|x|^2)``, rank one, ``rho=(m-1)/2``.
``poincare_disk_su11``
    Unit disk with metric factor ``1/(1-|z|^2)``, rank one, ``rho=1``.
``spd``
    Symmetric positive definite m x m matrices, rank ``m``.

A :class:`SpaceDescriptor` knows its constants and dispatches the geometric
primitives (composite distance, volume density, Plancherel density) to the
concrete modules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._numerics import gl_nodes
from .errors import ConfigurationError

__all__ = [
    "MODELS",
    "SpaceDescriptor",
    "QuadratureGrid",
    "space_descriptor",
    "boundary_grid",
    "frequency_grid",
    "ball_grid",
    "euclidean_grid",
    "spd_grid",
    "spd_polar_grid",
    "manifold_grid",
    "sphere_area",
    "ManifoldPoint",
    "BoundaryPoint",
]

MODELS = ("euclidean", "poincare_ball", "poincare_disk_su11", "spd")


def sphere_area(m: int) -> float:
    """Surface area of the unit sphere S^{m-1} in R^m."""
    return 2.0 * math.pi ** (m / 2) / math.gamma(m / 2)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and positive weights of a quadrature rule.

    ``nodes`` has the node index on the first axis.  ``meta`` holds optional
    structure (e.g. tensor factors) that fast paths may exploit.
    """

    nodes: np.ndarray
    weights: np.ndarray
    scheme_id: str
    probability: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        weights = _frozen(np.asarray(self.weights, dtype=float))
        if weights.ndim != 1 or nodes.shape[0] != weights.shape[0]:
            raise ConfigurationError("nodes and weights must have equal length")
        if np.any(weights <= 0):
            raise ConfigurationError("quadrature weights must be positive")
        if self.probability and abs(weights.sum() - 1.0) > 1e-12:
            raise ConfigurationError("probability grid weights must sum to one")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.weights.shape[0]

    def integrate(self, values):
        """Quadrature of sampled ``values`` (node index first)."""
        from ._numerics import pairwise_sum

        values = np.asarray(values)
        w = self.weights.reshape((-1,) + (1,) * (values.ndim - 1))
        return pairwise_sum(values * w, axis=0)


@dataclass(frozen=True)
class SpaceDescriptor:
    """Constants of one symmetric space model.

    Attributes
    ----------
    model : str
        One of :data:`MODELS`.
    dimension : int
        Manifold dimension ``m`` (matrix size for ``spd``).
    rank : int
        ``dim a``.
    weyl_order : int
        Order of the Weyl group used in the inversion and scalar product.
    rho : tuple of float
        Half-sum vector as stated for the model.  For ``spd`` this is the
        vector in power-function coordinates; use :attr:`rho_h` for the
        vector that pairs with composite distances.
    """

    model: str
    dimension: int
    rank: int
    weyl_order: int
    rho: tuple

    @property
    def is_euclidean(self) -> bool:
        return self.model == "euclidean"

    @property
    def is_hyperbolic(self) -> bool:
        return self.model in ("poincare_ball", "poincare_disk_su11")

    @property
    def is_spd(self) -> bool:
        return self.model == "spd"

    @property
    def tag(self) -> str:
        if self.model == "poincare_disk_su11":
            return self.model
        return f"{self.model}({self.dimension})"

    @property
    def rho_h(self) -> np.ndarray:
        """Half-sum vector paired with composite distances."""
        if self.is_spd:
            from .spd import power_map

            return power_map(np.asarray(self.rho, dtype=float))
        return np.asarray(self.rho, dtype=float)

    @property
    def point_shape(self) -> tuple:
        if self.is_spd:
            return (self.dimension, self.dimension)
        return (self.dimension,)

    @property
    def inversion_constant(self) -> float | None:
        """Constant in front of the Fourier inversion integral.

        Euclidean: ``(2 pi)^-m``.  Ball: ``c_m^2 / 2`` with
        ``c_m^2 = 2^{2 rho} / (2 pi vol(S^{m-1}))``.  SU(1,1) disk:
        ``1/(2 pi^2)``, twice the ball constant for m=2, because the
        disk metric is a quarter of the ball metric and so halves distances.
        SPD: ``omega_m`` of :func:`symridge.spd.omega_constant`, for
        frequencies integrated over all of R^m.
        """
        m = self.dimension
        if self.is_euclidean:
            return (2.0 * math.pi) ** (-m)
        if self.model == "poincare_ball":
            rho = (m - 1) / 2.0
            log_cm2 = 2 * rho * math.log(2.0) - math.log(2 * math.pi) - math.log(sphere_area(m))
            return 0.5 * math.exp(log_cm2)
        if self.model == "poincare_disk_su11":
            return 1.0 / (2.0 * math.pi**2)
        from .spd import omega_constant

        return omega_constant(m)

    def origin(self) -> np.ndarray:
        if self.is_spd:
            return np.eye(self.dimension)
        return np.zeros(self.dimension)

    # geometry dispatch -------------------------------------------------
    def composite_distance(self, x, u) -> np.ndarray:
        """Composite distances for all pairs.

        Parameters
        ----------
        x : array, shape (n_x,) + point_shape
        u : array, shape (n_u,) + boundary shape

        Returns
        -------
        array, shape (n_x, n_u, rank)
        """
        x = np.asarray(x, dtype=float)
        if self.is_euclidean:
            x = x.reshape(-1, self.dimension)
            n_u = np.asarray(u).shape[0] if np.ndim(u) > 1 else 1
            return np.broadcast_to(x[:, None, :], (x.shape[0], n_u, self.dimension))
        if self.is_hyperbolic:
            from .hyperbolic import composite_distance

            x = x.reshape(-1, self.dimension)
            u = np.asarray(u, dtype=float).reshape(-1, self.dimension)
            t = composite_distance(x[:, None, :], u[None, :, :], model=self.model)
            return t[..., None]
        from .spd import spd_composite_table

        m = self.dimension
        return spd_composite_table(x.reshape(-1, m, m), np.asarray(u, dtype=float).reshape(-1, m, m))

    def volume_density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.is_euclidean:
            return np.ones(x.reshape(-1, self.dimension).shape[0])
        if self.is_hyperbolic:
            from .hyperbolic import volume_density

            return volume_density(x.reshape(-1, self.dimension), self.dimension, model=self.model)
        from .spd import spd_measure_density

        m = self.dimension
        return spd_measure_density(x.reshape(-1, m, m), m)

    def plancherel(self, lam) -> np.ndarray:
        """Plancherel density ``|c(lambda)|^-2`` at frequencies ``(n, rank)``."""
        lam = np.asarray(lam, dtype=float).reshape(-1, self.rank)
        if self.is_euclidean:
            return np.ones(lam.shape[0])
        if self.is_hyperbolic:
            from .hyperbolic import plancherel_density

            return plancherel_density(lam[:, 0], self)
        from .spd import spd_plancherel_weight

        return spd_plancherel_weight(lam)


def space_descriptor(model: str, m: int | None = None) -> SpaceDescriptor:
    """Build the descriptor of a space model.

    Examples
    --------
    >>> space_descriptor("poincare_ball", 2).rho
    (0.5,)
    """
    if model not in MODELS:
        raise ConfigurationError(f"unsupported model tag {model!r}", field="space.model")
    if model == "poincare_disk_su11":
        if m not in (None, 2):
            raise ConfigurationError("the SU(1,1) disk is two-dimensional", field="space.dimension")
        return SpaceDescriptor(model, 2, 1, 1, (1.0,))
    if m is None or int(m) != m or m < 1:
        raise ConfigurationError("dimension must be a positive integer", field="space.dimension")
    m = int(m)
    if model == "euclidean":
        return SpaceDescriptor(model, m, m, 1, tuple([0.0] * m))
    if model == "poincare_ball":
        if m < 2:
            raise ConfigurationError("the ball model needs m >= 2", field="space.dimension")
        return SpaceDescriptor(model, m, 1, 1, ((m - 1) / 2.0,))
    rho = tuple([-0.5] * (m - 1) + [(m - 1) / 4.0])
    return SpaceDescriptor(model, m, m, math.factorial(m), rho)


@dataclass(frozen=True)
class ManifoldPoint:
    """A validated point of ``space`` (vector, or matrix for SPD)."""

    coords: np.ndarray
    space: SpaceDescriptor

    def __post_init__(self):
        from .errors import DomainError

        c = _frozen(np.asarray(self.coords, dtype=float).reshape(self.space.point_shape))
        if self.space.is_hyperbolic and float(np.sum(c * c)) >= 1.0:
            raise DomainError("ball points need |x| < 1")
        if self.space.is_spd:
            from .spd import validate_spd

            validate_spd(c)
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class BoundaryPoint:
    """A validated boundary point: unit vector, or orthogonal matrix for SPD."""

    coords: np.ndarray
    space: SpaceDescriptor

    def __post_init__(self):
        from .errors import DomainError

        c = _frozen(np.asarray(self.coords, dtype=float))
        if self.space.is_spd:
            m = self.space.dimension
            c = c.reshape(m, m)
            if np.max(np.abs(c.T @ c - np.eye(m))) > 1e-10:
                raise DomainError("boundary representative must be orthogonal")
        elif self.space.is_hyperbolic and abs(float(np.linalg.norm(c)) - 1.0) > 1e-12:
            raise DomainError("boundary points need unit norm")
        object.__setattr__(self, "coords", c)


# ---------------------------------------------------------------------------
# grids


def _sphere_product_grid(n: int):
    """Gauss-Legendre in cos(polar) times 2n equispaced azimuths on S^2.

    Integrates spherical polynomials of degree <= 2n-1 exactly.
    """
    z, wz = gl_nodes(n, -1.0, 1.0)
    n_phi = 2 * n
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    s = np.sqrt(1 - z**2)
    pts = np.stack(
        [
            (s[:, None] * np.cos(phi)[None, :]).ravel(),
            (s[:, None] * np.sin(phi)[None, :]).ravel(),
            np.repeat(z, n_phi),
        ],
        axis=1,
    )
    w = np.repeat(wz, n_phi) / (2.0 * n_phi)
    return pts, w


def _qmc_normal(n: int, d: int, seed: int) -> np.ndarray:
    from scipy.stats import norm, qmc

    sob = qmc.Sobol(d, scramble=True, seed=seed)
    # draw a power-of-two block and keep the first n points
    u = sob.random_base2(max(1, math.ceil(math.log2(n))))[:n]
    return norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))


def _haar_orthogonal(n: int, m: int, seed: int) -> np.ndarray:
    g = _qmc_normal(n, m * m, seed).reshape(n, m, m)
    q, r = np.linalg.qr(g)
    d = np.sign(np.diagonal(r, axis1=1, axis2=2))
    d[d == 0] = 1.0
    return q * d[:, None, :]


def boundary_grid(space: SpaceDescriptor, n: int, seed: int = 0) -> QuadratureGrid:
    """Equal-area style quadrature on the boundary with probability weights.

    * circle (ball m=2, SU(1,1) disk): ``n`` equispaced angles.
    * ball m=3: ``n`` Gauss-Legendre polar nodes times ``2n`` azimuths.
    * ball m>=4: ``n`` equal-weight quasi-random directions.
    * spd m=2: ``n`` equispaced rotation angles in ``[0, pi)``.
    * spd m>=3: ``n`` quasi-random orthogonal matrices, equal weights.
    * euclidean: one trivial node.
    """
    if n < 2 and not space.is_euclidean:
        raise ConfigurationError("boundary grid needs n >= 2", field="n_boundary")
    if space.is_euclidean:
        return QuadratureGrid(np.zeros((1, space.dimension)), np.ones(1), "trivial", True)
    m = space.dimension
    if space.is_hyperbolic:
        if m == 2:
            th = 2 * np.pi * np.arange(n) / n
            nodes = np.stack([np.cos(th), np.sin(th)], axis=1)
            return QuadratureGrid(nodes, np.full(n, 1.0 / n), "circle_equispaced", True,
                                  {"angles": th})
        if m == 3:
            pts, w = _sphere_product_grid(n)
            w = w / w.sum()
            return QuadratureGrid(pts, w, "sphere_gl_product", True, {"degree": 2 * n - 1})
        g = _qmc_normal(n, m, seed)
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return QuadratureGrid(g, np.full(n, 1.0 / n), "sphere_qmc", True)
    if m == 1:
        return QuadratureGrid(np.ones((1, 1, 1)), np.ones(1), "trivial", True)
    if m == 2:
        th = np.pi * np.arange(n) / n
        c, s = np.cos(th), np.sin(th)
        k = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], axis=1)
        return QuadratureGrid(k, np.full(n, 1.0 / n), "rotation_equispaced", True,
                              {"angles": th})
    k = _haar_orthogonal(n, m, seed)
    return QuadratureGrid(k, np.full(n, 1.0 / n), "orthogonal_qmc", True, {"seed": seed})


def frequency_grid(space: SpaceDescriptor, lambda_max: float = 20.0, n: int = 128) -> QuadratureGrid:
    """Tensor Gauss-Legendre grid on ``[-lambda_max, lambda_max]^rank``."""
    if lambda_max <= 0 or n < 1:
        raise ConfigurationError("lambda_max and n_freq must be positive", field="lambda_max")
    x, w = gl_nodes(n, -lambda_max, lambda_max)
    r = space.rank
    mesh = np.meshgrid(*([x] * r), indexing="ij")
    wmesh = np.meshgrid(*([w] * r), indexing="ij")
    nodes = np.stack([g.ravel() for g in mesh], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wmesh], axis=1), axis=1)
    return QuadratureGrid(nodes, weights, "gauss_legendre_tensor", False,
                          {"factor_nodes": x, "factor_weights": w, "rank": r})


def ball_grid(space: SpaceDescriptor, radius: float = 0.95, n_radial: int = 64,
              n_angular: int | None = None) -> QuadratureGrid:
    """Polar quadrature on ``|x| <= radius`` with Riemannian volume weights.

    Radial Gauss-Legendre nodes, equispaced angles (m=2) or the spherical
    product rule (m=3).  Weights include the volume density.
    """
    if not space.is_hyperbolic:
        raise ConfigurationError("ball_grid needs a hyperbolic model", field="space")
    if not 0 < radius < 1:
        raise ConfigurationError("ball radius must lie in (0, 1)", field="ball_radius")
    m = space.dimension
    r, wr = gl_nodes(n_radial, 0.0, radius)
    if m == 2:
        n_ang = n_angular or (2 * n_radial + 1)
        th = (np.arange(n_ang) + 0.5) * 2 * np.pi / n_ang
        dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
        wd = np.full(n_ang, 2 * np.pi / n_ang)
    elif m == 3:
        dirs, wd = _sphere_product_grid(n_angular or n_radial)
        wd = wd / wd.sum() * 4 * np.pi
    else:
        raise ConfigurationError("ball_grid supports m in {2, 3}", field="space.dimension")
    pts = (r[:, None, None] * dirs[None, :, :]).reshape(-1, m)
    w = (wr[:, None] * r[:, None] ** (m - 1) * wd[None, :]).ravel()
    w = w * space.volume_density(pts)
    return QuadratureGrid(pts, w, "ball_polar", False,
                          {"radius": radius, "n_radial": n_radial, "n_dirs": len(wd)})


def euclidean_grid(m: int, half_width: float = 8.0, n: int = 128) -> QuadratureGrid:
    """Tensor Gauss-Legendre grid on the cube ``[-L, L]^m``."""
    x, w = gl_nodes(n, -half_width, half_width)
    mesh = np.meshgrid(*([x] * m), indexing="ij")
    wmesh = np.meshgrid(*([w] * m), indexing="ij")
    nodes = np.stack([g.ravel() for g in mesh], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wmesh], axis=1), axis=1)
    return QuadratureGrid(nodes, weights, "gauss_legendre_tensor", False)


def spd_grid(m: int, h_max: float = 2.5, n_h: int = 32, nu_max: float = 6.0,
             n_nu: int = 48) -> QuadratureGrid:
    """Quadrature on SPD(m) in Cholesky coordinates ``x = nu diag(e^{2h}) nu^T``.

    ``h`` ranges over ``[-h_max, h_max]^m`` and each strictly upper entry of
    the unit upper-triangular ``nu`` over ``[-nu_max, nu_max]``.  Weights are
    the invariant measure in these coordinates,
    ``2^m prod_j lam_j^{j-(m+1)/2} dh dnu`` with ``lam = e^{2h}``.
    """
    hx, hw = gl_nodes(n_h, -h_max, h_max)
    vx, vw = gl_nodes(n_nu, -nu_max, nu_max)
    n_off = m * (m - 1) // 2
    axes = [hx] * m + [vx] * n_off
    waxes = [hw] * m + [vw] * n_off
    mesh = [g.ravel() for g in np.meshgrid(*axes, indexing="ij")]
    wts = np.prod(np.stack([g.ravel() for g in np.meshgrid(*waxes, indexing="ij")], 1), 1)
    h = np.stack(mesh[:m], axis=1)
    nu = np.tile(np.eye(m), (h.shape[0], 1, 1))
    iu = np.triu_indices(m, 1)
    for j, (a, b) in enumerate(zip(*iu)):
        nu[:, a, b] = mesh[m + j]
    lam = np.exp(2 * h)
    x = np.einsum("nij,nj,nkj->nik", nu, lam, nu)
    x = 0.5 * (x + np.swapaxes(x, 1, 2))
    expo = np.arange(1, m + 1) - (m + 1) / 2.0
    w = wts * 2.0**m * np.exp(np.sum(2 * h * expo, axis=1))
    return QuadratureGrid(x, w, "spd_cholesky_gl", False, {"h": h, "nu": nu})


def spd_polar_grid(a_max: float = 5.0, n_a: int = 56, n_theta: int = 48) -> QuadratureGrid:
    """Polar quadrature on SPD(2): ``x = k(theta) diag(e^{a_1}, e^{a_2}) k(theta)^T``.

    With ``s = a_1 + a_2`` on ``[-a_max, a_max]``, ``t = a_1 - a_2`` on
    ``[0, a_max]`` (Gauss-Legendre) and ``theta`` on ``[0, pi)``
    (trapezoid), the invariant measure is ``sinh(t/2) ds dt dtheta``.
    Unlike :func:`spd_grid`, every boundary rotation sees the same
    resolution, so transforms are accurate at all boundary nodes.
    """
    s, ws = gl_nodes(n_a, -a_max, a_max)
    t, wt = gl_nodes(n_a, 0.0, a_max)
    th = math.pi * np.arange(n_theta) / n_theta
    S, T, TH = (g.ravel() for g in np.meshgrid(s, t, th, indexing="ij"))
    w = np.einsum("i,j,k->ijk", ws, wt, np.full(n_theta, math.pi / n_theta)).ravel()
    c, sn = np.cos(TH), np.sin(TH)
    k = np.stack([np.stack([c, -sn], -1), np.stack([sn, c], -1)], -2)
    ev = np.exp(np.stack([0.5 * (S + T), 0.5 * (S - T)], 1))
    x = np.einsum("nij,nj,nkj->nik", k, ev, k)
    x = 0.5 * (x + np.swapaxes(x, 1, 2))
    # da1 da2 = ds dt / 2, density 2 sinh(t/2)
    return QuadratureGrid(x, w * np.sinh(0.5 * T), "spd_polar", False)


def manifold_grid(space: SpaceDescriptor, **kw: Any) -> QuadratureGrid:
    """Dispatch to the default X-grid of a model.

    SPD(2) uses :func:`spd_polar_grid`; larger SPD models use the Cholesky
    grid :func:`spd_grid`.
    """
    if space.is_hyperbolic:
        keys = ("radius", "n_radial", "n_angular")
        return ball_grid(space, **{k: kw[k] for k in keys if k in kw})
    if space.is_euclidean:
        keys = ("half_width", "n")
        return euclidean_grid(space.dimension, **{k: kw[k] for k in keys if k in kw})
    if space.dimension == 2:
        keys = ("a_max", "n_a", "n_theta")
        return spd_polar_grid(**{k: kw[k] for k in keys if k in kw})
    keys = ("h_max", "n_h", "nu_max", "n_nu")
    return spd_grid(space.dimension, **{k: kw[k] for k in keys if k in kw})
