"""One-dimensional activation and ridgelet profiles with their spectra.

The spectrum of a profile ``p`` is ``p#(w) = int p(b) exp(-i b w) db``.
Profiles defined by a spectrum (fractional Laplacians, band-limited
bumps) are evaluated by Gauss-Legendre quadrature of the inverse transform,
tabulated once on a uniform grid and interpolated by cubic splines.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import comb, eval_hermitenorm

from ._numerics import gl_nodes
from .errors import ConfigurationError

__all__ = [
    "Profile1D",
    "relu",
    "step",
    "tanh",
    "gaussian",
    "gaussian_deriv",
    "identity",
    "custom_sampled",
    "from_spectrum",
    "spectral_bump",
    "finite_difference",
    "fractional_laplacian",
    "make_profile",
    "numerical_spectrum",
]

TAGS = ("relu", "step", "tanh", "gaussian", "gaussian_deriv", "identity", "custom_sampled",
        "custom_spectral", "spectral_bump", "finite_difference", "fractional_laplacian",
        "shifted", "scaled")


def _auto_bandwidth(spec, rel: float = 1e-15, w_max: float = 400.0) -> float:
    w = np.arange(1, int(w_max / 0.05) + 1) * 0.05
    a = np.maximum(np.abs(spec(w)), np.abs(spec(-w)))
    peak = a.max()
    if peak == 0:
        return 1.0
    idx = np.nonzero(a > rel * peak)[0]
    if idx.size and idx[-1] == w.size - 1:
        raise ConfigurationError("spectrum does not decay within the scanned band")
    return float(w[idx[-1]] + 0.5) if idx.size else 1.0


@dataclass(frozen=True, eq=False)
class Profile1D:
    """A function of one real variable together with its spectrum.

    Parameters
    ----------
    tag : str
        Kind of profile; see :data:`TAGS`.
    params : dict
        Constructor parameters (serializable).
    func : callable
        Vectorized evaluation.
    spec : callable or None
        Vectorized spectrum, or ``None`` when only a distributional
        spectrum exists (ReLU, step).
    base : Profile1D or None
        Profile this one was derived from.
    bandwidth : float or None
        Frequency beyond which the spectrum is negligible (``None`` for
        spectra without such a cutoff).
    """

    tag: str
    params: dict
    func: Callable
    spec: Callable | None = None
    base: "Profile1D | None" = None
    bandwidth: float | None = None
    meta: dict = field(default_factory=dict)

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    @property
    def has_spectrum(self) -> bool:
        return self.spec is not None

    def spectrum(self, w):
        if self.spec is None:
            raise ConfigurationError(f"profile {self.tag!r} has no regular spectrum")
        return self.spec(np.asarray(w, dtype=float))

    @property
    def is_bounded_lipschitz(self) -> bool:
        """Whether the profile satisfies the universality hypothesis as is."""
        if self.tag in ("relu", "step", "identity"):
            return False
        if self.tag == "finite_difference":
            return self.params["k"] >= 1 or self.base.is_bounded_lipschitz
        if self.tag in ("shifted", "scaled"):
            return self.base.is_bounded_lipschitz
        return True

    def shift(self, c: float) -> "Profile1D":
        """``b -> p(b - c)``."""
        sp = None if self.spec is None else (lambda w: np.exp(-1j * c * w) * self.spec(w))
        return Profile1D("shifted", {"c": c}, lambda t: self.func(t - c), sp, self, self.bandwidth)

    def scaled(self, c: complex) -> "Profile1D":
        """``b -> c p(b)``."""
        sp = None if self.spec is None else (lambda w: c * self.spec(w))
        return Profile1D("scaled", {"c": c}, lambda t: c * self.func(t), sp, self, self.bandwidth)

    def describe(self) -> dict:
        d = {"tag": self.tag}
        d.update({k: v for k, v in self.params.items() if isinstance(v, (int, float, str))})
        if self.base is not None:
            d["base"] = self.base.describe()
        return d


# ---------------------------------------------------------------------------
# analytic profiles


def relu() -> Profile1D:
    return Profile1D("relu", {}, lambda t: np.maximum(t, 0.0), None)


def step() -> Profile1D:
    return Profile1D("step", {}, lambda t: np.heaviside(t, 0.5), None)


def identity() -> Profile1D:
    return Profile1D("identity", {}, lambda t: np.asarray(t, dtype=float), None)


def _tanh_spec(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape, dtype=complex)
    nz = w != 0
    # -i pi csch(pi w / 2), principal value at 0
    out[nz] = -1j * math.pi / np.sinh(0.5 * math.pi * w[nz])
    return out


def tanh() -> Profile1D:
    """``tanh`` with spectrum ``-i pi csch(pi w / 2)`` (principal value)."""
    return Profile1D("tanh", {}, np.tanh, _tanh_spec, bandwidth=25.0)


def gaussian(scale: float = 1.0) -> Profile1D:
    """``exp(-b^2 / (2 s^2))`` with spectrum ``sqrt(2 pi) s exp(-s^2 w^2 / 2)``."""
    s = float(scale)
    return Profile1D(
        "gaussian", {"scale": s},
        lambda t: np.exp(-0.5 * (t / s) ** 2),
        lambda w: (math.sqrt(2 * math.pi) * s * np.exp(-0.5 * (s * w) ** 2)).astype(complex),
        bandwidth=9.0 / s,
    )


def gaussian_deriv(k: int, scale: float = 1.0) -> Profile1D:
    """k-th derivative of the Gaussian, spectrum ``(i w)^k`` times the Gaussian's.

    ``d^k/db^k exp(-b^2/(2 s^2)) = (-1/s)^k He_k(b/s) exp(-b^2/(2 s^2))``.
    """
    k = int(k)
    s = float(scale)
    if k < 0:
        raise ConfigurationError("derivative order must be >= 0")
    g = gaussian(s)

    def f(t):
        u = t / s
        return (-1.0 / s) ** k * eval_hermitenorm(k, u) * np.exp(-0.5 * u * u)

    return Profile1D("gaussian_deriv", {"k": k, "scale": s}, f,
                     lambda w: (1j * w) ** k * g.spec(w),
                     bandwidth=(9.0 + 1.5 * math.sqrt(k)) / s)


# ---------------------------------------------------------------------------
# sampled and spectrally defined profiles


def custom_sampled(b, values) -> Profile1D:
    """Profile from samples on a uniform grid (zero outside).

    The spectrum is the trapezoid quadrature of the defining integral.
    """
    b = np.asarray(b, dtype=float)
    v = np.asarray(values)
    h = np.diff(b)
    if b.ndim != 1 or b.size < 4 or np.ptp(h) > 1e-9 * abs(h[0]):
        raise ConfigurationError("custom_sampled needs a uniform grid of >= 4 nodes")
    w = np.full(b.size, h[0])
    w[[0, -1]] *= 0.5
    cs = CubicSpline(b, v)

    def f(t):
        out = np.zeros(np.shape(t), dtype=cs(b[:1]).dtype)
        inside = (t >= b[0]) & (t <= b[-1])
        out[inside] = cs(t[inside])
        return out

    def sp(wq):
        wq = np.asarray(wq, dtype=float)
        return np.exp(-1j * np.multiply.outer(wq, b)) @ (v * w)

    return Profile1D("custom_sampled", {"n": int(b.size)}, f, sp,
                     bandwidth=math.pi / h[0])


class _SpectralEvaluator:
    """Inverse transform of a spectrum, tabulated and spline-interpolated."""

    def __init__(self, spec, omega_max, table_half_width, table_step, split_zero=True):
        self.spec = spec
        self.omega_max = float(omega_max)
        self.B = float(table_half_width)
        self.h = float(table_step)
        n = int(max(256, math.ceil(self.omega_max * self.B / 1.5) + 64))
        if split_zero:
            wl, ql = gl_nodes(n, -self.omega_max, 0.0)
            wr, qr = gl_nodes(n, 0.0, self.omega_max)
            self.w = np.concatenate([wl, wr])
            self.q = np.concatenate([ql, qr])
        else:
            self.w, self.q = gl_nodes(2 * n, -self.omega_max, self.omega_max)
        self.coef = self.spec(self.w) * self.q / (2 * math.pi)
        self._lock = threading.Lock()
        self._spline = None

    def direct(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape, dtype=complex)
        flat = t.ravel()
        res = out.ravel()
        for s in range(0, flat.size, 2048):
            res[s : s + 2048] = np.exp(1j * np.multiply.outer(flat[s : s + 2048], self.w)) @ self.coef
        return res.reshape(t.shape)

    def _table(self):
        with self._lock:
            if self._spline is None:
                n = int(round(2 * self.B / self.h)) + 1
                tb = np.linspace(-self.B, self.B, n)
                self._spline = CubicSpline(tb, self.direct(tb))
        return self._spline

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        sp = self._table()
        inside = np.abs(t) <= self.B
        if np.all(inside):
            return sp(t)
        out = np.empty(t.shape, dtype=complex)
        out[inside] = sp(t[inside])
        out[~inside] = self.direct(t[~inside])
        return out


def from_spectrum(spec, tag: str = "custom_spectral", params=None, base=None,
                  omega_max: float | None = None, table_half_width: float = 64.0,
                  table_step: float = 0.01, real: bool = False) -> Profile1D:
    """Profile defined by its spectrum.

    Evaluation uses the inverse transform
    ``p(b) = (1/2 pi) int p#(w) exp(i b w) dw`` truncated to
    ``|w| <= omega_max`` (detected automatically when omitted).
    """
    spec_c = lambda w: np.asarray(spec(np.asarray(w, dtype=float)), dtype=complex)
    wmax = _auto_bandwidth(spec_c) if omega_max is None else float(omega_max)
    ev = _SpectralEvaluator(spec_c, wmax, table_half_width, table_step)
    func = (lambda t: ev(t).real) if real else ev
    return Profile1D(tag, dict(params or {}), func, spec_c, base, wmax,
                     {"evaluator": ev})


def _smooth_window(w, lo, hi):
    """C-infinity bump supported on ``lo < |w| < hi`` (or ``|w| < hi`` if lo=0)."""
    a = np.abs(np.asarray(w, dtype=float))
    if lo == 0:
        s = a / hi
        inside = s < 1
        s2 = np.where(inside, s * s, 0.0)
        return np.where(inside, np.exp(-s2 / np.where(inside, 1 - s2, 1.0)), 0.0)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    s = (a - mid) / half
    inside = np.abs(s) < 1
    s2 = np.where(inside, s * s, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / np.where(inside, 1 - s2, 1.0)), 0.0)


def spectral_bump(lo: float, hi: float, odd: bool = False) -> Profile1D:
    """Real profile whose spectrum is a smooth bump on ``lo < |w| < hi``.

    With ``odd=True`` the spectrum is multiplied by ``-i sign(w)``.
    """
    if not 0 <= lo < hi:
        raise ConfigurationError("spectral_bump needs 0 <= lo < hi")

    def sp(w):
        v = _smooth_window(w, lo, hi).astype(complex)
        return -1j * np.sign(w) * v if odd else v

    return from_spectrum(sp, "spectral_bump", {"lo": lo, "hi": hi, "odd": int(odd)},
                         omega_max=hi, real=True)


# ---------------------------------------------------------------------------
# operators


def _fd_factor(w, k, theta):
    w = np.asarray(w, dtype=float)
    # exp(i theta w) - 1 without cancellation
    return (2j * np.sin(0.5 * theta * w) * np.exp(0.5j * theta * w)) ** k


def finite_difference(sigma: Profile1D, k: int, theta: float = 1.0) -> Profile1D:
    """Forward difference ``sum_j (-1)^{k-j} C(k,j) sigma(t + j theta)``.

    The spectrum is ``(e^{i theta w} - 1)^k sigma#(w)`` when that product is
    a regular function: always for regular ``sigma#``, for ReLU when
    ``k >= 2`` and for the step when ``k >= 1``.
    """
    k = int(k)
    if k < 0 or theta <= 0:
        raise ConfigurationError("finite_difference needs k >= 0 and theta > 0")
    if k == 0:
        return sigma
    coefs = [(-1) ** (k - j) * comb(k, j, exact=True) for j in range(k + 1)]

    def f(t):
        return sum(c * sigma(t + j * theta) for j, c in enumerate(coefs))

    spec = None
    if sigma.spec is not None:
        spec = lambda w: _fd_factor(w, k, theta) * sigma.spec(w)
    elif sigma.tag == "relu" and k >= 2:
        def spec(w):
            w = np.asarray(w, dtype=float)
            small = np.abs(w) < 1e-8
            ws = np.where(small, 1.0, w)
            val = -_fd_factor(ws, k, theta) / ws**2
            return np.where(small, theta**2 if k == 2 else 0.0, val)
    elif sigma.tag == "step" and k >= 1:
        def spec(w):
            w = np.asarray(w, dtype=float)
            small = np.abs(w) < 1e-8
            ws = np.where(small, 1.0, w)
            val = _fd_factor(ws, k, theta) / (1j * ws)
            return np.where(small, theta if k == 1 else 0.0, val)
    bw = sigma.bandwidth
    return Profile1D("finite_difference", {"k": k, "theta": float(theta)}, f, spec, sigma, bw)


def fractional_laplacian(rho0: Profile1D, r: float, **kw) -> Profile1D:
    """``Delta^{r/2} rho0``: the profile with spectrum ``|w|^r rho0#(w)``."""
    if r <= 0:
        raise ConfigurationError("fractional Laplacian order must be positive", field="r")
    if not rho0.has_spectrum:
        raise ConfigurationError(f"profile {rho0.tag!r} has no spectrum")
    sp = lambda w: np.abs(w) ** r * rho0.spec(w)
    kw.setdefault("omega_max", None)
    return from_spectrum(sp, "fractional_laplacian", {"r": float(r)}, base=rho0, **kw)


def numerical_spectrum(p: Profile1D, w, half_width: float = 40.0, n: int = 4001) -> np.ndarray:
    """Spectrum of a decaying profile by composite Gauss-Legendre quadrature."""
    edges = np.linspace(-half_width, half_width, n // 16 + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, q = gl_nodes(16, lo, hi)
        xs.append(x)
        ws.append(q)
    x = np.concatenate(xs)
    q = np.concatenate(ws)
    return np.exp(-1j * np.multiply.outer(np.asarray(w, float), x)) @ (p(x) * q)


def make_profile(spec: dict) -> Profile1D:
    """Build a profile from a config dictionary ``{"kind": ..., **params}``."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    fd = spec.pop("finite_difference", None)
    table = {
        "relu": relu,
        "step": step,
        "tanh": tanh,
        "gaussian": gaussian,
        "gaussian_deriv": gaussian_deriv,
        "spectral_bump": spectral_bump,
    }
    if kind not in table:
        raise ConfigurationError(f"unknown profile kind {kind!r}", field="profile.kind")
    try:
        p = table[kind](**spec)
    except TypeError as exc:
        raise ConfigurationError(str(exc), field="profile") from exc
    if fd is not None:
        p = finite_difference(p, int(fd.get("k", 1)), float(fd.get("theta", 1.0)))
    return p
