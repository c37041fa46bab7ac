"""Constructive finite-network synthesis.

The ridgelet density is restricted to the compact box
``V = [-delta/2, delta/2]^{r+1} x boundary``, the box is cut into ``n``
intervals per (a, b) axis times boundary patches, and every cell becomes
one atom whose coefficient is the midpoint value of ``R`` times the cell
volume divided by ``<<sigma,rho>>``.
"""
from __future__ import annotations

import csv
import itertools
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .profiles import Profile1D, fractional_laplacian, make_profile
from .ridgelet import (AtomicMeasure, _checked_product, bias_grid, network_apply, ridgelet_grid,
                       scale_grid, spectrum_interpolant)
from .spaces import QuadratureGrid, SpaceDescriptor, boundary_grid, space_descriptor

__all__ = [
    "ParameterDomain",
    "CellDecomposition",
    "FiniteNetwork",
    "build_domain",
    "decompose",
    "extract_coefficients",
    "sup_error",
    "l2_error",
    "disk_evaluation_set",
    "universality_sweep",
    "write_errors_csv",
]


@dataclass(frozen=True)
class ParameterDomain:
    """``[-delta/2, delta/2]^{rank+1}`` times boundary patches."""

    delta: float
    rank: int
    patches: QuadratureGrid

    @property
    def box_volume(self) -> float:
        return self.delta ** (self.rank + 1)

    def contains(self, a, b) -> np.ndarray:
        a = np.atleast_2d(a)
        half = 0.5 * self.delta
        return np.all(np.abs(a) <= half, axis=1) & (np.abs(np.ravel(b)) <= half)


def build_domain(space: SpaceDescriptor, delta: float, n_patches: int = 64,
                 seed: int = 0) -> ParameterDomain:
    """Compact parameter domain of extent ``delta``.

    Boundary patches are the cells of :func:`boundary_grid` with ``n_patches``
    nodes; each patch has measure equal to its node weight.
    """
    if delta <= 0:
        raise ConfigurationError("delta must be positive", field="delta")
    return ParameterDomain(float(delta), space.rank, boundary_grid(space, n_patches, seed))


@dataclass(frozen=True)
class CellDecomposition:
    """Uniform split of the (a, b) box crossed with boundary patches.

    Cell ``i`` is the box ``[lo_i, hi_i]`` in the ``rank+1`` coordinates
    ``(a_1, ..., a_r, b)`` on patch ``patch_i``.
    """

    domain: ParameterDomain
    n: int
    lo: np.ndarray
    hi: np.ndarray
    patch: np.ndarray

    def __len__(self):
        return self.patch.size

    @property
    def representatives(self):
        """Midpoints ``(a, u, b)`` of all cells."""
        mid = 0.5 * (self.lo + self.hi)
        return mid[:, :-1], self.domain.patches.nodes[self.patch], mid[:, -1]

    @property
    def volumes(self) -> np.ndarray:
        return np.prod(self.hi - self.lo, axis=1) * self.domain.patches.weights[self.patch]

    @property
    def diameter(self) -> float:
        """Largest (a, b)-diameter over cells."""
        return float(np.max(np.linalg.norm(self.hi - self.lo, axis=1)))

    @property
    def axis_midpoints(self) -> np.ndarray:
        h = self.domain.delta / self.n
        return -0.5 * self.domain.delta + h * (np.arange(self.n) + 0.5)


def decompose(domain: ParameterDomain, n: int) -> CellDecomposition:
    """Split each of the ``rank+1`` box axes into ``n`` equal intervals.

    Cells are ordered with the boundary patch slowest, then ``a_1..a_r``,
    then ``b``.
    """
    if n < 1:
        raise ConfigurationError("refinement level must be >= 1", field="n_levels")
    d = domain.rank + 1
    edges = np.linspace(-0.5 * domain.delta, 0.5 * domain.delta, n + 1)
    idx = np.array(list(itertools.product(range(n), repeat=d)), dtype=int).reshape(-1, d)
    n_p = len(domain.patches)
    lo = np.tile(edges[idx], (n_p, 1))
    hi = np.tile(edges[idx + 1], (n_p, 1))
    patch = np.repeat(np.arange(n_p), idx.shape[0])
    return CellDecomposition(domain, int(n), lo, hi, patch)


@dataclass(frozen=True)
class FiniteNetwork:
    """``f_n(x) = sum_i c_i sigma(a_i.<x,u_i> - b_i) exp(rho.<x,u_i>)``."""

    atoms: AtomicMeasure
    space: SpaceDescriptor
    sigma: Profile1D
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.atoms)

    def __call__(self, x):
        return network_apply(self.atoms, self.sigma, x, self.space)

    def to_json(self) -> dict:
        at = self.atoms
        return {
            "space": {"model": self.space.model, "dimension": self.space.dimension},
            "sigma": self.sigma.describe(),
            "atoms": {
                "c_re": at.c.real.tolist(),
                "c_im": at.c.imag.tolist(),
                "a": at.a.tolist(),
                "u": at.u.reshape(len(at), -1).tolist(),
                "b": at.b.tolist(),
            },
        }

    @classmethod
    def from_json(cls, doc: dict, sigma: Profile1D | None = None) -> "FiniteNetwork":
        space = space_descriptor(doc["space"]["model"], doc["space"]["dimension"])
        if sigma is None:
            sd = dict(doc["sigma"])
            tag = sd.pop("tag")
            base = sd.pop("base", None)
            if tag == "finite_difference":
                btag = dict(base)
                btag["kind"] = btag.pop("tag")
                btag.pop("base", None)
                sigma = make_profile({**btag, "finite_difference": sd})
            else:
                sigma = make_profile({"kind": tag, **sd})
        at = doc["atoms"]
        n = len(at["b"])
        ushape = (space.dimension, space.dimension) if space.is_spd else (space.dimension,)
        u = np.asarray(at["u"], dtype=float).reshape((n,) + ushape)
        c = np.asarray(at["c_re"]) + 1j * np.asarray(at["c_im"])
        return cls(AtomicMeasure(c, np.asarray(at["a"]).reshape(n, -1), u, at["b"]), space, sigma)


def extract_coefficients(f, sigma: Profile1D, rho: Profile1D, cells: CellDecomposition,
                         space: SpaceDescriptor, x_grid: QuadratureGrid, **kw) -> FiniteNetwork:
    """Atoms ``c_i = R[f;rho](mid_i) vol_i / <<sigma,rho>>`` at cell midpoints.

    The midpoints form a product grid, so ``R`` is computed in one call of
    :func:`symridge.ridgelet.ridgelet_grid`.
    """
    prod = _checked_product(sigma, rho, space)
    if space.rank != 1:
        raise ConfigurationError("coefficient extraction is implemented for rank one", field="space")
    mids = cells.axis_midpoints
    h = cells.domain.delta / cells.n
    a_grid = QuadratureGrid(mids[:, None], np.full(cells.n, h), "midpoint")
    b_grid = QuadratureGrid(mids, np.full(cells.n, h), "midpoint")
    dens = ridgelet_grid(f, rho, space, a_grid, cells.domain.patches, b_grid, x_grid, **kw)
    # cell order: patch slowest, then a, then b
    R = np.transpose(dens.values, (1, 0, 2)).reshape(-1)
    c = R * cells.volumes / prod
    a, u, b = cells.representatives
    net = FiniteNetwork(AtomicMeasure(c, a, u, b), space, sigma,
                        {"product": prod, "edge_ratio": dens.meta.get("edge_ratio")})
    return net


def sup_error(net, f, points) -> float:
    """``max |f_n(x) - f(x)|`` over the evaluation points."""
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return 0.0
    return float(np.max(np.abs(np.asarray(net(points)) - np.asarray(f(points)))))


def l2_error(net, f, grid: QuadratureGrid) -> float:
    """Weighted RMS error ``sqrt(sum w |f_n - f|^2 / sum w)`` on a grid."""
    e = np.abs(np.asarray(net(grid.nodes)) - np.asarray(f(grid.nodes))) ** 2
    return float(math.sqrt(grid.integrate(e) / grid.weights.sum()))


def disk_evaluation_set(radius: float = 0.8, n_radial: int = 9, n_angular: int = 12,
                        dim: int = 2) -> QuadratureGrid:
    """Polar evaluation grid on ``|x| <= radius`` with area weights (m=2)."""
    if dim != 2:
        raise ConfigurationError("evaluation set implemented for m = 2", field="evaluation")
    r = np.linspace(0.0, radius, n_radial)
    th = 2 * np.pi * (np.arange(n_angular) + 0.25) / n_angular
    pts = [np.zeros((1, 2))]
    wts = [np.array([math.pi * (0.5 * r[1]) ** 2])]
    dr = r[1] - r[0]
    for ri in r[1:]:
        pts.append(np.stack([ri * np.cos(th), ri * np.sin(th)], 1))
        wts.append(np.full(n_angular, 2 * math.pi * ri * dr / n_angular))
    return QuadratureGrid(np.concatenate(pts), np.concatenate(wts), "disk_eval")


def _check_hypothesis(sigma: Profile1D):
    if not sigma.is_bounded_lipschitz:
        raise ConfigurationError(
            f"activation {sigma.tag!r} is not bounded Lipschitz; apply finite_difference first",
            field="sigma")


def universality_sweep(f, sigma: Profile1D, rho0: Profile1D, space: SpaceDescriptor, schedule,
                       x_grid: QuadratureGrid, evaluation: QuadratureGrid, n_patches: int = 64,
                       band_limited: bool = False, seed: int = 0, **kw):
    """Error table of finite networks along a ``(delta, n)`` schedule.

    ``rho = Delta^{r/2} rho0``.  Each row holds ``delta``, ``n_level``,
    ``atoms``, ``sup_error``, ``l2_error`` and ``seconds``; with
    ``band_limited`` also the error of the continuous network restricted to
    the box (``bandlimited_error``).

    Returns
    -------
    rows : list of dict
    networks : list of FiniteNetwork
    """
    _check_hypothesis(sigma)
    schedule = list(schedule)
    if not schedule:
        raise ConfigurationError("schedule must be non-empty", field="synthesis.n_levels")
    rho = fractional_laplacian(rho0, space.rank)
    rows, nets = [], []
    if not space.is_euclidean and "spectrum" not in kw:
        # one interpolant of f^ serves every level
        reach = 0.5 * max(float(d) for d, _ in schedule) * rho.bandwidth
        kw = {**kw, "spectrum": spectrum_interpolant(
            f, space, boundary_grid(space, n_patches, seed), x_grid,
            min(kw.get("lam_max", 40.0), reach), kw.get("n_cheb", 192))}
    for delta, n in schedule:
        t0 = time.perf_counter()
        dom = build_domain(space, delta, n_patches, seed)
        cells = decompose(dom, int(n))
        net = extract_coefficients(f, sigma, rho, cells, space, x_grid, **kw)
        row = {
            "delta": float(delta),
            "n_level": int(n),
            "atoms": len(net),
            "sup_error": sup_error(net, f, evaluation.nodes),
            "l2_error": l2_error(net, f, evaluation),
        }
        if band_limited:
            row["bandlimited_error"] = _band_limited_error(f, sigma, rho, space, dom, x_grid,
                                                           evaluation, **kw)
        row["seconds"] = time.perf_counter() - t0
        rows.append(row)
        nets.append(net)
    return rows, nets


def _band_limited_error(f, sigma, rho, space, dom, x_grid, evaluation, n_scale=96, n_bias=192, **kw):
    from .ridgelet import Reconstruction, _checked_product

    prod = _checked_product(sigma, rho, space)
    half = 0.5 * dom.delta
    a_grid = scale_grid(space.rank, 0.0, half, n_scale)
    b_grid = bias_grid(half, n_bias)
    dens = ridgelet_grid(f, rho, space, a_grid, dom.patches, b_grid, x_grid, **kw)
    rec = Reconstruction(dens, sigma, space, prod)
    return sup_error(rec, f, evaluation.nodes)


def tail_mass(f, rho: Profile1D, space: SpaceDescriptor, delta: float, x_grid, n_patches=64,
              n_scale=96, n_bias=256, **kw) -> float:
    """Share of ``int |R|`` over ``[-delta, delta]^2`` lying outside ``V``."""
    a_grid = scale_grid(space.rank, 0.0, float(delta), n_scale)
    b_grid = bias_grid(float(delta), n_bias)
    patches = boundary_grid(space, n_patches)
    dens = ridgelet_grid(f, rho, space, a_grid, patches, b_grid, x_grid, **kw)
    w = np.abs(dens.weighted())
    inside = (np.abs(a_grid.nodes[:, 0])[:, None, None] <= 0.5 * delta) & \
             (np.abs(b_grid.nodes)[None, None, :] <= 0.5 * delta)
    total = float(np.sum(w))
    return float(np.sum(w * ~inside) / total) if total > 0 else 0.0


ERROR_COLUMNS = ("delta", "n_level", "atoms", "sup_error", "l2_error")


def write_errors_csv(rows, path, extra=()) -> None:
    """Error table as CSV with deterministic formatting (no timings)."""
    cols = list(ERROR_COLUMNS) + [c for c in extra if c not in ERROR_COLUMNS]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in rows:
            w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in cols])


def write_network_json(net: FiniteNetwork, path) -> None:
    with open(path, "w") as fh:
        json.dump(net.to_json(), fh, indent=1)
