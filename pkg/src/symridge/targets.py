"""Smooth test functions used by the demos, the batch runner and the tests."""
from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .fourier import ScalarField, spd_gaussian

__all__ = ["bump", "radial_bump", "offset_bump", "two_bump", "gaussian", "zero", "make_target"]


def bump(s, alpha: float = 4.0):
    """``exp(-alpha s^2 / (1 - s^2))`` for ``|s| < 1``, zero outside."""
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1.0
    s2 = np.where(inside, s * s, 0.0)
    return np.where(inside, np.exp(-alpha * s2 / np.where(inside, 1.0 - s2, 1.0)), 0.0)


def radial_bump(radius: float = 0.6, alpha: float = 4.0) -> ScalarField:
    """Compactly supported radial bump of Euclidean radius ``radius``."""
    return offset_bump((0.0,), radius, alpha)


def offset_bump(center, radius: float = 0.4, alpha: float = 4.0) -> ScalarField:
    """Bump centered at ``center`` (padded with zeros to the point dimension)."""
    c = np.asarray(center, dtype=float)

    def f(x):
        x = np.asarray(x, dtype=float)
        cc = np.zeros(x.shape[-1])
        cc[: c.size] = c
        return bump(np.linalg.norm(x - cc, axis=-1) / radius, alpha)

    reach = float(np.linalg.norm(c)) + radius
    return ScalarField(f, reach, f"bump(c={c.tolist()}, r={radius}, alpha={alpha})")


def two_bump(c1=(0.3, 0.0), c2=(-0.2, 0.25), radius: float = 0.3, alpha: float = 4.0,
             weights=(1.0, -0.6)) -> ScalarField:
    b1, b2 = offset_bump(c1, radius, alpha), offset_bump(c2, radius, alpha)
    return ScalarField(lambda x: weights[0] * b1(x) + weights[1] * b2(x),
                       max(b1.support_radius, b2.support_radius), "two_bump")


def gaussian(scale: float = 1.0) -> ScalarField:
    """``exp(-|x|^2 / (2 scale^2))`` on Euclidean space."""
    return ScalarField(lambda x: np.exp(-np.sum(np.asarray(x) ** 2, axis=-1) / (2 * scale**2)),
                       None, f"gaussian({scale})")


def zero() -> ScalarField:
    return ScalarField(lambda x: np.zeros(np.asarray(x).shape[0]), 0.0, "zero")


def make_target(spec: dict) -> ScalarField:
    """Build a target from a config dictionary ``{"kind": ..., **params}``."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    table = {
        "radial_bump": radial_bump,
        "offset_bump": offset_bump,
        "two_bump": two_bump,
        "gaussian": gaussian,
        "spd_gaussian": spd_gaussian,
        "zero": zero,
    }
    if kind not in table:
        raise ConfigurationError(f"unknown target kind {kind!r}", field="target.kind")
    try:
        return table[kind](**spec)
    except TypeError as exc:
        raise ConfigurationError(str(exc), field="target") from exc
