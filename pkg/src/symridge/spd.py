"""Geometry of the manifold of symmetric positive definite matrices.

Conventions
-----------
* ``g[x] = g x g^T`` is the GL(m) action; the origin is the identity.
* ``x = nu diag(lam) nu^T`` with ``nu`` unit upper-triangular (pivots taken
  from the bottom-right corner).
* The composite distance of ``x`` at the boundary point ``u = kM`` is
  ``h = 1/2 log lam(k^T x k)``, a vector of length ``m``.
* Frequencies ``s`` of the c-function live in power-function coordinates.
  :func:`power_map` sends them to the linear form that pairs with ``h``:
  ``(T s)_i = 2 sum_{j >= m+1-i} s_j``.  Under ``T`` the half-sum vector
  ``(-1/2, ..., -1/2, (m-1)/4)`` becomes ``((m+1)/2 - i)_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma, rgamma

from .errors import DecompositionError, DomainError, EvaluationError

__all__ = [
    "validate_spd",
    "group_action",
    "CholeskyNA",
    "cholesky_na",
    "cholesky_na_batch",
    "spd_composite_distance",
    "spd_composite_table",
    "symmetric_sqrt",
    "iwasawa_h",
    "iwasawa_composite_distance",
    "spd_measure_density",
    "spd_c_function",
    "spd_plancherel_weight",
    "power_map",
    "omega_constant",
    "random_spd",
    "random_orthogonal",
]


def validate_spd(x, tol: float = 1e-12) -> np.ndarray:
    """Return ``x`` as an array after checking symmetry and positivity."""
    x = np.asarray(x, dtype=float)
    if x.ndim < 2 or x.shape[-1] != x.shape[-2]:
        raise DomainError("SPD points must be square matrices")
    scale = max(1.0, float(np.max(np.abs(x))))
    if np.max(np.abs(x - np.swapaxes(x, -1, -2))) > tol * scale:
        raise DomainError("SPD points must be symmetric")
    if np.any(np.linalg.eigvalsh(x) <= 0):
        raise DomainError("SPD points must be positive definite")
    return x


def group_action(g, x) -> np.ndarray:
    """``g[x] = g x g^T``."""
    g = np.asarray(g, dtype=float)
    x = validate_spd(x)
    if np.any(np.abs(np.linalg.det(g)) < 1e-300):
        raise DomainError("group element must be invertible")
    y = g @ x @ np.swapaxes(g, -1, -2)
    return 0.5 * (y + np.swapaxes(y, -1, -2))


@dataclass(frozen=True)
class CholeskyNA:
    """``x = nu diag(lam) nu^T`` with ``nu`` unit upper-triangular."""

    nu: np.ndarray
    lam: np.ndarray

    def matrix(self) -> np.ndarray:
        return (self.nu * self.lam[..., None, :]) @ np.swapaxes(self.nu, -1, -2)


def cholesky_na_batch(x):
    """Vectorized :func:`cholesky_na` over leading axes; returns ``(nu, lam)``."""
    x = np.asarray(x, dtype=float)
    if np.max(np.abs(x - np.swapaxes(x, -1, -2)), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(x))):
        raise DecompositionError("input is not symmetric")
    # reversing rows and columns turns bottom-right pivots into the
    # top-left pivots of the standard lower Cholesky factor
    xr = x[..., ::-1, ::-1]
    try:
        low = np.linalg.cholesky(xr)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError("input is not positive definite") from exc
    d = np.diagonal(low, axis1=-2, axis2=-1)
    if np.any(~np.isfinite(d)) or np.any(d <= 0):
        raise DecompositionError("input is not positive definite")
    unit = low / d[..., None, :]
    nu = unit[..., ::-1, ::-1]
    lam = (d * d)[..., ::-1]
    return nu, lam


def cholesky_na(x) -> CholeskyNA:
    """Decompose an SPD matrix as ``nu diag(lam) nu^T`` (``nu`` upper unit).

    Examples
    --------
    >>> c = cholesky_na([[5.0, 2.0], [2.0, 1.0]])
    >>> c.lam.tolist(), c.nu[0, 1]
    ([1.0, 1.0], 2.0)
    """
    nu, lam = cholesky_na_batch(np.asarray(x, dtype=float))
    return CholeskyNA(nu, lam)


def spd_composite_distance(x, k) -> np.ndarray:
    """``1/2 log lam(k^T x k)`` for one or many pairs (broadcasting)."""
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=float)
    y = np.swapaxes(k, -1, -2) @ x @ k
    _, lam = cholesky_na_batch(y)
    return 0.5 * np.log(lam)


def spd_composite_table(xs, ks) -> np.ndarray:
    """Composite distances for all pairs, shape ``(n_x, n_k, m)``."""
    xs = np.asarray(xs, dtype=float)
    ks = np.asarray(ks, dtype=float)
    y = np.einsum("kai,nab,kbj->nkij", ks, xs, ks, optimize=True)
    _, lam = cholesky_na_batch(y)
    return 0.5 * np.log(lam)


def symmetric_sqrt(x) -> np.ndarray:
    """Symmetric positive square root via the spectral decomposition."""
    w, v = np.linalg.eigh(np.asarray(x, dtype=float))
    return (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v, -1, -2)


def iwasawa_h(h) -> np.ndarray:
    """``H(h)`` from ``h = k exp(H) n`` by modified Gram-Schmidt.

    The columns of ``h`` are orthonormalized left to right; the resulting
    upper-triangular factor ``R`` splits as ``diag(R) * (unit upper)``, so
    ``H = log diag(R)``.
    """
    a = np.array(h, dtype=float)
    m = a.shape[-1]
    diag = np.empty(m)
    q = a.copy()
    for j in range(m):
        for i in range(j):
            q[:, j] -= (q[:, i] @ q[:, j]) * q[:, i]
        nrm = np.linalg.norm(q[:, j])
        if nrm == 0:
            raise DecompositionError("matrix is singular")
        diag[j] = nrm
        q[:, j] /= nrm
    return np.log(diag)


def iwasawa_composite_distance(x, k) -> np.ndarray:
    """Oracle for the composite distance: ``-H(g^-1 k)`` with ``g = sqrt(x)``."""
    g = symmetric_sqrt(x)
    return -iwasawa_h(np.linalg.solve(g, np.asarray(k, dtype=float)))


def spd_measure_density(x, m: int | None = None) -> np.ndarray:
    """``|det x|^{-(m+1)/2}``, the invariant measure density."""
    x = np.asarray(x, dtype=float)
    m = x.shape[-1] if m is None else m
    sign, logdet = np.linalg.slogdet(x)
    if np.any(sign <= 0):
        raise DomainError("SPD points must have positive determinant")
    return np.exp(-0.5 * (m + 1) * logdet)


def _beta_args(s):
    s = np.asarray(s, dtype=complex)
    m = s.shape[-1]
    out = []
    for i in range(m - 1):
        for j in range(i, m - 1):
            out.append((np.sum(s[..., i : j + 1], axis=-1) + 0.5 * (j - i + 1), 0.5 * (j - i + 1)))
    return out


def spd_c_function(s):
    """Harish-Chandra c-function of GL(m) in power-function coordinates.

    ``c(s) = prod_{1<=i<=j<m} B(1/2, s_i+...+s_j + (j-i+1)/2) / B(1/2, (j-i+1)/2)``
    """
    s = np.asarray(s, dtype=complex)
    logc = np.zeros(s.shape[:-1], dtype=complex)
    for z, half in _beta_args(s):
        if np.any((np.abs(z - np.round(z.real)) < 1e-12) & (np.round(z.real) <= 0)):
            raise EvaluationError("c-function evaluated at a pole of Gamma")
        log_b = loggamma(0.5) + loggamma(z) - loggamma(z + 0.5)
        log_b0 = loggamma(0.5) + loggamma(half) - loggamma(half + 0.5)
        logc = logc + log_b - log_b0
    out = np.exp(logc)
    return out.real if np.all(np.isreal(s)) else out


def power_map(s) -> np.ndarray:
    """Send power-function coordinates to the form paired with ``h``."""
    s = np.asarray(s)
    m = s.shape[-1]
    t = np.zeros((m, m))
    for i in range(m):
        t[i, m - 1 - i:] = 2.0
    return s @ t.T


def spd_plancherel_weight(lam):
    """``|c(i lam + rho_s)|^-2`` with ``rho_s = (-1/2,...,-1/2,(m-1)/4)``.

    Evaluated through ``1/Gamma`` so that zeros of the weight (e.g. at
    ``lam = 0``) are exact.  For m = 2 this equals
    ``pi lam_1 tanh(pi lam_1)``.
    """
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    m = lam.shape[-1]
    rho = np.array([-0.5] * (m - 1) + [(m - 1) / 4.0])
    s = 1j * lam + rho
    inv_c = np.ones(lam.shape[:-1], dtype=complex)
    for z, half in _beta_args(s):
        # 1/B(1/2, z) = Gamma(z + 1/2) / (Gamma(1/2) Gamma(z))
        b0 = math.exp((loggamma(0.5) + loggamma(half) - loggamma(half + 0.5)).real)
        inv_c = inv_c * b0 * rgamma(z) * np.exp(loggamma(z + 0.5)) / math.sqrt(math.pi)
    return np.abs(inv_c) ** 2


def omega_constant(m: int) -> float:
    """Real value of ``omega_m i^m`` with
    ``omega_m = prod_j Gamma(j/2) / (j (2 pi i) pi^{j/2})``.

    This is the inversion constant of the SPD model for frequencies
    integrated over all of R^m.
    """
    val = 1.0 + 0j
    for j in range(1, m + 1):
        val *= math.gamma(j / 2) / (j * (2j * math.pi) * math.pi ** (j / 2))
    return float((val * 1j**m).real)


def random_spd(rng, m: int, n: int | None = None, spread: float = 1.0):
    """Random SPD matrices ``q diag(e^{spread z}) q^T``."""
    shape = () if n is None else (n,)
    q = random_orthogonal(rng, m, n)
    ev = np.exp(spread * rng.standard_normal(shape + (m,)))
    x = (q * ev[..., None, :]) @ np.swapaxes(q, -1, -2)
    return 0.5 * (x + np.swapaxes(x, -1, -2))


def random_orthogonal(rng, m: int, n: int | None = None):
    shape = () if n is None else (n,)
    g = rng.standard_normal(shape + (m, m))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    return q * d[..., None, :]
