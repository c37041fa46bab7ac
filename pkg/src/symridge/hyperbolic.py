"""Poincare ball and SU(1,1) disk geometry.

All functions broadcast over leading axes; points carry their Euclidean
coordinates on the last axis.  Points with ``|x| > 1 - 1e-9`` are rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, DomainError

__all__ = [
    "BOUNDARY_CUTOFF",
    "poincare_distance",
    "disk_distance",
    "composite_distance",
    "poisson_weight",
    "volume_density",
    "plancherel_density",
    "Horosphere",
    "horocycle_points",
    "MobiusElement",
    "mobius_apply",
]

BOUNDARY_CUTOFF = 1.0 - 1e-9


def _check_inside(x, name="x"):
    x = np.asarray(x, dtype=float)
    n2 = np.sum(x * x, axis=-1)
    if np.any(n2 > BOUNDARY_CUTOFF**2) or not np.all(np.isfinite(n2)):
        raise DomainError(f"{name} must lie strictly inside the unit ball")
    return x, n2


def _check_unit(u):
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(np.linalg.norm(u, axis=-1) - 1.0) > 1e-9):
        raise DomainError("boundary points must have unit norm")
    return u


def poincare_distance(x, y):
    """Riemannian distance of the ball model (curvature -1).

    ``arccosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)))``
    """
    x, nx = _check_inside(x)
    y, ny = _check_inside(y, "y")
    d2 = np.sum((x - y) ** 2, axis=-1)
    # 2 asinh(sqrt(q/2)) equals arccosh(1+q) and keeps precision near 0
    q = 2.0 * d2 / ((1.0 - nx) * (1.0 - ny))
    return 2.0 * np.arcsinh(np.sqrt(0.5 * q))


def disk_distance(z, w):
    """Distance of the SU(1,1) disk, ``atanh|(z-w)/(1-z conj(w))|``."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(z) > BOUNDARY_CUTOFF) or np.any(np.abs(w) > BOUNDARY_CUTOFF):
        raise DomainError("disk points must satisfy |z| < 1")
    return np.arctanh(np.abs((z - w) / (1.0 - z * np.conj(w))))


def composite_distance(x, u, model: str = "poincare_ball"):
    """Signed distance from the origin to the horosphere through ``x`` at ``u``.

    Ball: ``log((1-|x|^2)/|x-u|^2)``; SU(1,1) disk: half of that.
    """
    x, nx = _check_inside(x)
    u = _check_unit(u)
    t = np.log1p(-nx) - np.log(np.sum((x - u) ** 2, axis=-1))
    if model == "poincare_disk_su11":
        return 0.5 * t
    if model != "poincare_ball":
        raise ConfigurationError(f"not a hyperbolic model: {model!r}")
    return t


def poisson_weight(x, u, space):
    """``exp(rho <x,u>)``, the Poisson kernel of the model."""
    t = composite_distance(x, u, model=space.model)
    return np.exp(space.rho[0] * t)


def volume_density(x, m: int, model: str = "poincare_ball"):
    """Density of the Riemannian volume w.r.t. Lebesgue measure."""
    _, n2 = _check_inside(x)
    if model == "poincare_disk_su11":
        return (1.0 - n2) ** -2
    return (2.0 / (1.0 - n2)) ** m


def _log_double_factorial(n: int) -> float:
    """log(n!!) for n >= -1."""
    if n <= 0:
        return 0.0
    if n % 2:
        k = (n + 1) // 2
        return float(gammaln(2 * k + 1) - k * math.log(2.0) - gammaln(k + 1))
    k = n // 2
    return float(k * math.log(2.0) + gammaln(k + 1))


def _pi_lam_tanh(lam):
    lam = np.abs(lam)
    return math.pi * lam * np.tanh(math.pi * lam)


def plancherel_density(lam, space):
    """Plancherel density ``|c(lambda)|^-2`` of a hyperbolic model.

    ``m = 2k+1``: ``(2^{k-1}(2k-1)!!)^-2 prod_{j<k} (lam^2 + j^2)``.

    ``m = 2k``: ``(2^{k-1}(2k-2)!!)^-2 pi lam tanh(pi lam) / (lam^2+1/4)
    prod_{j<k} (lam^2 + ((2j-1)/2)^2)``; the ``j=0`` factor cancels the
    denominator and is dropped analytically.

    SU(1,1) disk: ``(pi lam / 2) tanh(pi lam / 2)``.
    """
    lam = np.asarray(lam, dtype=float)
    if space.model == "poincare_disk_su11":
        return _pi_lam_tanh(0.5 * lam)
    if space.model != "poincare_ball":
        raise ConfigurationError("plancherel_density needs a hyperbolic model")
    m = space.dimension
    l2 = lam * lam
    if m % 2:
        k = (m - 1) // 2
        log_pref = -2.0 * ((k - 1) * math.log(2.0) + _log_double_factorial(2 * k - 1))
        out = np.full_like(lam, math.exp(log_pref))
        for j in range(k):
            out = out * (l2 + j * j)
        return out
    k = m // 2
    log_pref = -2.0 * ((k - 1) * math.log(2.0) + _log_double_factorial(2 * k - 2))
    out = math.exp(log_pref) * _pi_lam_tanh(lam)
    for j in range(1, k):
        out = out * (l2 + ((2 * j - 1) / 2.0) ** 2)
    return out


@dataclass(frozen=True, eq=False)
class Horosphere:
    """Horosphere through ``through`` tangent to the boundary at ``normal``."""

    through: np.ndarray
    normal: np.ndarray
    model: str = "poincare_ball"

    @property
    def value(self) -> float:
        return float(composite_distance(self.through, self.normal, self.model))

    def __eq__(self, other):
        if not isinstance(other, Horosphere) or other.model != self.model:
            return NotImplemented
        return (abs(self.value - other.value) <= 1e-12
                and np.allclose(self.normal, other.normal, rtol=0, atol=1e-12))

    __hash__ = None

    def contains(self, y, tol: float = 1e-9) -> np.ndarray:
        return np.abs(composite_distance(y, self.normal, self.model) - self.value) <= tol

    def euclidean_sphere(self):
        """Center and radius of the Euclidean sphere carrying the horosphere."""
        return _horo_sphere(self.value, np.asarray(self.normal, float), self.model)


def _horo_sphere(v, u, model):
    # the horosphere meets the axis through u at s*u with <s u, u> = v
    s = math.tanh(v) if model == "poincare_disk_su11" else math.tanh(v / 2.0)
    return 0.5 * (1.0 + s) * u, 0.5 * (1.0 - s)


def horocycle_points(value: float, u, n: int = 16, model: str = "poincare_ball"):
    """Points of the level set ``{y : <y,u> = value}``.

    The points lie on the Euclidean sphere tangent to the boundary at ``u``
    and exclude the tangency point itself.
    """
    u = _check_unit(u)
    c, r = _horo_sphere(value, u, model)
    m = u.shape[-1]
    if m == 2:
        phi = np.pi * (2 * np.arange(n) + 1) / n
        base = np.arctan2(u[1], u[0])
        d = np.stack([np.cos(base + phi), np.sin(base + phi)], axis=1)
    else:
        rng = np.random.default_rng(12345)
        d = rng.standard_normal((n, m))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        d[d @ u > 0.9] *= -1.0
    return c[None, :] + r * d


@dataclass(frozen=True)
class MobiusElement:
    """Element of SU(1,1), ``z -> (alpha z + beta) / (conj(beta) z + conj(alpha))``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        det = abs(a) ** 2 - abs(b) ** 2
        if abs(det - 1.0) > 1e-12 * max(1.0, abs(a) ** 2):
            raise DomainError("|alpha|^2 - |beta|^2 must equal 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def boost(cls, t: float):
        return cls(math.cosh(t), math.sinh(t))

    @classmethod
    def rotation(cls, phi: float):
        return cls(complex(math.cos(phi), math.sin(phi)), 0.0)

    @classmethod
    def random(cls, rng, t_max: float = 1.5):
        t = rng.uniform(0, t_max)
        p, q = rng.uniform(0, 2 * np.pi, size=2)
        return cls(math.cosh(t) * complex(math.cos(p), math.sin(p)),
                   math.sinh(t) * complex(math.cos(q), math.sin(q)))

    def matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])

    def __matmul__(self, other: "MobiusElement") -> "MobiusElement":
        g = self.matrix() @ other.matrix()
        return MobiusElement(g[0, 0], g[0, 1])


def mobius_apply(g: MobiusElement, z):
    """Action of ``g`` on disk or boundary points (complex coordinates)."""
    z = np.asarray(z, dtype=complex)
    return (g.alpha * z + g.beta) / (np.conj(g.beta) * z + np.conj(g.alpha))
