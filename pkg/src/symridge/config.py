"""Experiment configuration: defaults, parsing and validation.

A configuration is a JSON document.  Missing keys take the defaults below;
unknown keys are rejected so that typos surface as configuration errors.
:func:`resolve` returns an :class:`ExperimentConfig` whose
:meth:`~ExperimentConfig.to_dict` is the fully resolved document echoed in
every report.
"""
from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigurationError
from .spaces import MODELS

__all__ = ["ExperimentConfig", "DEFAULTS", "resolve", "load_config", "shipped_configs"]

DEFAULTS: dict = {
    "space": {"model": "poincare_ball", "dimension": 2},
    "target": {"kind": "radial_bump", "radius": 0.6, "alpha": 4.0},
    "sigma": {"kind": "gaussian", "scale": 1.0},
    "rho0": {"kind": "gaussian_deriv", "k": 4, "scale": 1.4},
    "grids": {
        "lambda_max": None,
        "n_freq": None,
        "n_boundary": None,
        "ball_radius": 0.95,
        "n_radial": 64,
        "n_angular": None,
        "x_half_width": 8.0,
        "n_x": 128,
        "spd_a_max": 5.0,
        "spd_n_a": 56,
        "spd_n_theta": 48,
        "a_min": 0.0,
        "a_max": 8.0,
        "n_scale": 128,
        "b_max": 12.0,
        "n_bias": 256,
        "lambda_cheb": 40.0,
        "n_cheb": 192,
        "n_omega": 96,
    },
    "evaluation": {"radius": 0.8, "n_radial": 9, "n_angular": 12, "half_width": 2.0, "n_points": 81},
    "synthesis": {"delta": 16.0, "n_levels": [4, 8, 16], "n_patches": 64, "band_limited": True,
                  "tail_mass": True},
    "dump": {"n_scale": 16, "n_boundary": 8, "n_bias": 64},
    "out": "symridge_out",
    "seed": 0,
}

# model-dependent values for grid keys left as null
_MODEL_GRIDS = {
    "spd": {"lambda_max": 8.0, "n_freq": 48, "n_boundary": 16},
    "other": {"lambda_max": 20.0, "n_freq": 128, "n_boundary": 128},
}
# keys that may be zero; every other number must be positive
_NONNEGATIVE = {"grids.a_min", "seed"}
_INTEGER = {
    "space.dimension", "grids.n_freq", "grids.n_boundary", "grids.n_radial", "grids.n_angular",
    "grids.n_x", "grids.spd_n_a", "grids.spd_n_theta", "grids.n_scale", "grids.n_bias",
    "grids.n_cheb", "grids.n_omega", "evaluation.n_radial", "evaluation.n_angular",
    "evaluation.n_points", "synthesis.n_patches", "dump.n_scale", "dump.n_boundary", "dump.n_bias",
    "seed",
}
# free-form sections: parameters are checked by the constructors
_OPEN = {"target", "sigma", "rho0"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved experiment configuration.

    Attributes mirror the top-level sections of the JSON document.
    """

    space: dict
    target: dict
    sigma: dict
    rho0: dict
    grids: dict
    evaluation: dict
    synthesis: dict
    dump: dict
    out: str
    seed: int
    source: str | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "space": copy.deepcopy(self.space),
            "target": copy.deepcopy(self.target),
            "sigma": copy.deepcopy(self.sigma),
            "rho0": copy.deepcopy(self.rho0),
            "grids": copy.deepcopy(self.grids),
            "evaluation": copy.deepcopy(self.evaluation),
            "synthesis": copy.deepcopy(self.synthesis),
            "dump": copy.deepcopy(self.dump),
            "out": self.out,
            "seed": self.seed,
        }

    @property
    def schedule(self) -> list:
        """``(delta, n)`` pairs of the synthesis sweep."""
        d = float(self.synthesis["delta"])
        return [(d, int(n)) for n in self.synthesis["n_levels"]]


def _merge(base: dict, user: dict, path: str) -> dict:
    out = copy.deepcopy(base)
    for key, val in user.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigurationError("unknown key", field=where)
        if isinstance(base[key], dict) and path == "" and key not in _OPEN:
            if not isinstance(val, dict):
                raise ConfigurationError("must be an object", field=where)
            out[key] = _merge(base[key], val, where)
        elif key in _OPEN and path == "":
            if not isinstance(val, dict) or "kind" not in val:
                raise ConfigurationError("must be an object with a 'kind'", field=where)
            out[key] = copy.deepcopy(val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def _check_number(where: str, val):
    if val is None and where == "grids.n_angular":
        return  # ball_grid picks 2 n_radial + 1
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigurationError(f"must be a number, got {val!r}", field=where)
    if where in _INTEGER and int(val) != val:
        raise ConfigurationError(f"must be an integer, got {val!r}", field=where)
    if where in _NONNEGATIVE:
        if val < 0:
            raise ConfigurationError(f"must be >= 0, got {val!r}", field=where)
    elif val <= 0:
        raise ConfigurationError(f"must be positive, got {val!r}", field=where)


def _validate(doc: dict) -> None:
    sp = doc["space"]
    if sp.get("model") not in MODELS:
        raise ConfigurationError(f"unsupported model tag {sp.get('model')!r}", field="space.model")
    if sp.get("dimension") is not None:
        _check_number("space.dimension", sp["dimension"])
    for section in ("grids", "evaluation", "dump"):
        for key, val in doc[section].items():
            _check_number(f"{section}.{key}", val)
    g = doc["grids"]
    if g["a_min"] >= g["a_max"]:
        raise ConfigurationError("must be smaller than grids.a_max", field="grids.a_min")
    if g["n_bias"] < 2:
        raise ConfigurationError("must be >= 2", field="grids.n_bias")
    syn = doc["synthesis"]
    _check_number("synthesis.delta", syn["delta"])
    _check_number("synthesis.n_patches", syn["n_patches"])
    levels = syn["n_levels"]
    if not isinstance(levels, list) or not levels:
        raise ConfigurationError("must be a non-empty list", field="synthesis.n_levels")
    for n in levels:
        _check_number("synthesis.n_levels", n)
        if int(n) != n:
            raise ConfigurationError("must hold integers", field="synthesis.n_levels")
    for key in ("band_limited", "tail_mass"):
        if not isinstance(syn[key], bool):
            raise ConfigurationError("must be true or false", field=f"synthesis.{key}")
    _check_number("seed", doc["seed"])
    if not isinstance(doc["out"], str) or not doc["out"]:
        raise ConfigurationError("must be a non-empty path", field="out")


def resolve(user: dict | None = None, source: str | None = None) -> ExperimentConfig:
    """Merge ``user`` over :data:`DEFAULTS` and validate.

    Raises
    ------
    ConfigurationError
        With ``field`` set to the dotted path of the offending key.
    """
    user = {} if user is None else user
    if not isinstance(user, dict):
        raise ConfigurationError("must be a JSON object", field="<root>")
    doc = _merge(DEFAULTS, user, "")
    fill = _MODEL_GRIDS["spd" if doc["space"].get("model") == "spd" else "other"]
    for key, val in fill.items():
        if doc["grids"][key] is None:
            doc["grids"][key] = val
    _validate(doc)
    # integers stay integers in the echo
    for key in _INTEGER:
        sec, _, name = key.partition(".")
        holder = doc if not name else doc[sec]
        k = name or sec
        if holder.get(k) is not None:
            holder[k] = int(holder[k])
    doc["synthesis"]["n_levels"] = [int(n) for n in doc["synthesis"]["n_levels"]]
    return ExperimentConfig(source=source, **doc)


def shipped_configs() -> list[str]:
    """Names of the configurations bundled with the package."""
    root = resources.files("symridge") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(name_or_path: str | None) -> ExperimentConfig:
    """Load a config from a file path or a shipped config name."""
    if name_or_path is None:
        return resolve({}, None)
    if os.path.exists(name_or_path):
        text, source = open(name_or_path).read(), os.path.abspath(name_or_path)
    else:
        stem = name_or_path[:-5] if name_or_path.endswith(".json") else name_or_path
        res = resources.files("symridge") / "configs" / f"{stem}.json"
        if not res.is_file():
            raise ConfigurationError(
                f"config {name_or_path!r} is neither a file nor one of {shipped_configs()}",
                field="--config")
        text, source = res.read_text(), f"shipped:{stem}"
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}", field="--config") from exc
    return resolve(doc, source)
