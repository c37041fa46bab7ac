"""Batch experiment runner.

Usage::

    python3 -m symridge <subcommand> --config <path-or-name> [--out DIR]
                        [--threads N] [--verbose]

Subcommands: ``transform``, ``plancherel``, ``reconstruct``,
``ridgelet-dump``, ``universality`` and ``selfcheck``.  Every run writes
``report.json`` (metrics, resolved config, versions, timing) plus
task-specific CSV files.  Wall times appear only in ``report.json`` so that
CSV outputs are byte-identical across runs and thread counts.

Exit status is 0 on success, 2 for configuration errors and 3 for
numerical failures; the error category is printed to stderr as one JSON
line and recorded in ``report.json``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import os
import platform
import sys
import time

import numpy as np

from . import __version__
from ._numerics import set_threads
from .config import ExperimentConfig, load_config, shipped_configs
from .errors import ConfigurationError, SymRidgeError
from .fourier import hf_forward, hf_inverse, plancherel_check, write_spectrum_csv
from .profiles import fractional_laplacian, make_profile
from .ridgelet import bias_grid, reconstruct, ridgelet_grid, scale_grid, write_ridgelet_csv
from .spaces import (QuadratureGrid, ball_grid, boundary_grid, euclidean_grid, frequency_grid,
                     manifold_grid, space_descriptor)
from .synthesis import (disk_evaluation_set, tail_mass, universality_sweep, write_errors_csv,
                        write_network_json)
from .targets import make_target

__all__ = ["main", "run", "SUBCOMMANDS"]

log = logging.getLogger("symridge")

SUBCOMMANDS = ("transform", "plancherel", "reconstruct", "ridgelet-dump", "universality", "selfcheck")


# ---------------------------------------------------------------------------
# building blocks from a config


def _space(cfg: ExperimentConfig):
    return space_descriptor(cfg.space["model"], cfg.space.get("dimension"))


def _x_grid(cfg, space) -> QuadratureGrid:
    g = cfg.grids
    if space.is_hyperbolic:
        return ball_grid(space, g["ball_radius"], g["n_radial"], g["n_angular"])
    if space.is_euclidean:
        return euclidean_grid(space.dimension, g["x_half_width"], g["n_x"])
    return manifold_grid(space, a_max=g["spd_a_max"], n_a=g["spd_n_a"], n_theta=g["spd_n_theta"])


def _evaluation(cfg, space) -> QuadratureGrid:
    ev = cfg.evaluation
    if space.is_hyperbolic:
        if space.dimension != 2:
            raise ConfigurationError("evaluation sets are implemented for m = 2", field="space.dimension")
        return disk_evaluation_set(ev["radius"], ev["n_radial"], ev["n_angular"])
    if space.is_euclidean:
        x = np.linspace(-ev["half_width"], ev["half_width"], ev["n_points"])
        w = np.full(x.size, x[1] - x[0] if x.size > 1 else 1.0)
        mesh = np.stack([g.ravel() for g in np.meshgrid(*([x] * space.dimension), indexing="ij")], 1)
        wts = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * space.dimension),
                                                              indexing="ij")], 1), 1)
        return QuadratureGrid(mesh, wts, "uniform_box")
    from .spd import random_spd

    rng = np.random.default_rng(cfg.seed)
    pts = random_spd(rng, space.dimension, ev["n_points"], spread=0.4)
    return QuadratureGrid(pts, np.full(len(pts), 1.0 / len(pts)), "random_spd", True)


def _profiles(cfg, space):
    sigma = make_profile(cfg.sigma)
    rho = fractional_laplacian(make_profile(cfg.rho0), space.rank)
    return sigma, rho


def _ridgelet_kw(cfg) -> dict:
    g = cfg.grids
    return {"lam_max": g["lambda_cheb"], "n_cheb": g["n_cheb"], "n_omega": g["n_omega"]}


def _rel(err, scale):
    return float(err / scale) if scale > 0 else float(err)


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _point_columns(nodes):
    flat = np.asarray(nodes, dtype=float).reshape(len(nodes), -1)
    return [f"x_{i + 1}" for i in range(flat.shape[1])], flat


# ---------------------------------------------------------------------------
# subcommands; each returns (metrics, files)


def _spectrum(cfg, space, f):
    g = cfg.grids
    fg = frequency_grid(space, g["lambda_max"], g["n_freq"])
    bg = boundary_grid(space, g["n_boundary"], cfg.seed)
    xg = _x_grid(cfg, space)
    return hf_forward(f, space, fg, bg, xg), fg, bg, xg


def cmd_transform(cfg, out, timer):
    space = _space(cfg)
    f = make_target(cfg.target)
    with timer("forward"):
        F, fg, bg, xg = _spectrum(cfg, space, f)
    write_spectrum_csv(F, os.path.join(out, "spectra.csv"))
    ev = _evaluation(cfg, space)
    with timer("inverse"):
        rec = hf_inverse(F, ev.nodes)
    ref = np.asarray(f(ev.nodes))
    amp = np.abs(F.values)
    scale = float(amp.max())
    metrics = {
        "frequency_nodes": len(fg),
        "boundary_nodes": len(bg),
        "x_nodes": len(xg),
        "max_abs_spectrum": scale,
        "boundary_spread": _rel(float(np.max(amp.max(1) - amp.min(1))), scale),
        "roundtrip_sup_error": float(np.max(np.abs(rec - ref))),
        "roundtrip_sup_rel_error": _rel(float(np.max(np.abs(rec - ref))), float(np.max(np.abs(ref)))),
        "inversion_constant": float(F.inversion_constant),
    }
    return metrics, ["spectra.csv"]


def cmd_plancherel(cfg, out, timer):
    space = _space(cfg)
    f = make_target(cfg.target)
    with timer("forward"):
        F, fg, bg, xg = _spectrum(cfg, space, f)
    lhs, rhs = plancherel_check(f, space, fg, bg, xg, F=F)
    write_spectrum_csv(F, os.path.join(out, "spectra.csv"))
    metrics = {"lhs": lhs, "rhs": rhs, "abs_error": abs(lhs - rhs), "rel_error": _rel(abs(lhs - rhs), lhs)}
    return metrics, ["spectra.csv"]


def _check_rank_one(space):
    if space.rank != 1:
        raise ConfigurationError(
            "this pipeline needs a rank-one space (ball, SU(1,1) disk or Euclidean m = 1)",
            field="space.model")


def cmd_reconstruct(cfg, out, timer):
    space = _space(cfg)
    _check_rank_one(space)
    f = make_target(cfg.target)
    sigma, rho = _profiles(cfg, space)
    g = cfg.grids
    xg = _x_grid(cfg, space)
    bg = boundary_grid(space, g["n_boundary"], cfg.seed)
    a_grid = scale_grid(space.rank, g["a_min"], g["a_max"], g["n_scale"])
    b_grid = bias_grid(g["b_max"], g["n_bias"])
    with timer("ridgelet"):
        rec = reconstruct(f, sigma, rho, space, xg, bg, a_grid, b_grid, **_ridgelet_kw(cfg))
    ev = _evaluation(cfg, space)
    with timer("synthesis"):
        vals = rec(ev.nodes)
    ref = np.asarray(f(ev.nodes))
    err = np.abs(vals - ref)
    head, pts = _point_columns(ev.nodes)
    _write_rows(os.path.join(out, "reconstruction.csv"), head + ["f", "re", "im"],
                [list(p) + [float(r), float(v.real), float(v.imag)] for p, r, v in zip(pts, ref, vals)])
    sup_f = float(np.max(np.abs(ref)))
    metrics = {
        "scalar_product_re": float(rec.product.real),
        "scalar_product_im": float(rec.product.imag),
        "sup_error": float(err.max()),
        "sup_rel_error": _rel(float(err.max()), sup_f),
        "l2_error": float(np.sqrt(ev.integrate(err**2) / ev.integrate(np.ones(len(ev))))),
        "max_imag": float(np.max(np.abs(vals.imag))),
        "edge_ratio": rec.density.meta.get("edge_ratio"),
        "evaluation_points": len(ev),
    }
    return metrics, ["reconstruction.csv"]


def cmd_ridgelet_dump(cfg, out, timer):
    space = _space(cfg)
    _check_rank_one(space)
    f = make_target(cfg.target)
    _, rho = _profiles(cfg, space)
    g, d = cfg.grids, cfg.dump
    a_grid = scale_grid(space.rank, g["a_min"], g["a_max"], d["n_scale"])
    bg = boundary_grid(space, d["n_boundary"], cfg.seed)
    b_grid = bias_grid(g["b_max"], d["n_bias"])
    with timer("ridgelet"):
        dens = ridgelet_grid(f, rho, space, a_grid, bg, b_grid, _x_grid(cfg, space), **_ridgelet_kw(cfg))
    write_ridgelet_csv(dens, os.path.join(out, "ridgelet.csv"))
    metrics = {"max_abs": float(np.max(np.abs(dens.values))), "samples": int(dens.values.size),
               "route": dens.meta.get("route", "spectral")}
    return metrics, ["ridgelet.csv"]


def cmd_universality(cfg, out, timer):
    space = _space(cfg)
    _check_rank_one(space)
    f = make_target(cfg.target)
    sigma = make_profile(cfg.sigma)
    rho0 = make_profile(cfg.rho0)
    syn = cfg.synthesis
    ev = _evaluation(cfg, space)
    xg = _x_grid(cfg, space)
    with timer("sweep"):
        rows, nets = universality_sweep(f, sigma, rho0, space, cfg.schedule, xg, ev,
                                        n_patches=syn["n_patches"], band_limited=syn["band_limited"],
                                        seed=cfg.seed, **_ridgelet_kw(cfg))
    extra = ("bandlimited_error",) if syn["band_limited"] else ()
    write_errors_csv(rows, os.path.join(out, "errors.csv"), extra)
    write_network_json(nets[-1], os.path.join(out, "network.json"))
    sup_f = float(np.max(np.abs(f(ev.nodes))))
    errs = [r["sup_error"] for r in rows]
    metrics = {
        "levels": [{k: v for k, v in r.items()} for r in rows],
        "final_sup_error": errs[-1],
        "final_sup_rel_error": _rel(errs[-1], sup_f),
        "non_increasing": all(b <= 1.1 * a for a, b in zip(errs, errs[1:])),
    }
    if syn["tail_mass"]:
        with timer("tail_mass"):
            metrics["tail_mass"] = tail_mass(f, fractional_laplacian(rho0, space.rank), space,
                                             cfg.schedule[-1][0], xg, syn["n_patches"],
                                             **_ridgelet_kw(cfg))
    return metrics, ["errors.csv", "network.json"]


def _selfcheck_battery():
    """Cheap checks whose expected values follow from definitions alone."""
    from .hyperbolic import composite_distance, poincare_distance
    from .profiles import relu, step, finite_difference, gaussian, tanh
    from .ridgelet import AtomicMeasure
    from .spd import cholesky_na
    from .synthesis import FiniteNetwork, _check_hypothesis, build_domain, decompose, sup_error
    from .targets import zero

    ball = space_descriptor("poincare_ball", 2)

    def raises(fn, exc=ConfigurationError):
        try:
            fn()
        except exc:
            return True
        return False

    def plancherel_zero():
        fg = frequency_grid(ball, 20.0, 16)
        bg = boundary_grid(ball, 8)
        xg = ball_grid(ball, 0.95, 8)
        lhs, rhs = plancherel_check(zero(), ball, fg, bg, xg)
        return lhs == 0.0 and rhs == 0.0

    def domain_volume():
        cells = decompose(build_domain(ball, 2.0, 8), 2)
        return len(cells) == 4 * 8 and abs(cells.volumes.sum() - 4.0) < 1e-12

    def empty_network():
        net = FiniteNetwork(AtomicMeasure(np.zeros(0), np.zeros((0, 1)), np.zeros((0, 2)), np.zeros(0)),
                            ball, gaussian())
        return sup_error(net, zero(), np.zeros((3, 2))) == 0.0

    def cholesky_example():
        c = cholesky_na([[5.0, 2.0], [2.0, 1.0]])
        return np.allclose(c.lam, [1.0, 1.0]) and abs(c.nu[0, 1] - 2.0) < 1e-14

    x = np.array([[0.3, -0.2]])
    checks = {
        "ball_descriptor": lambda: (ball.rank, ball.weyl_order, ball.rho) == (1, 1, (0.5,)),
        "distance_to_self_zero": lambda: float(poincare_distance(x, x)[0]) == 0.0,
        "composite_distance_origin_zero": lambda: abs(float(composite_distance(
            np.zeros(2), np.array([1.0, 0.0])))) < 1e-15,
        "unsupported_model_rejected": lambda: raises(lambda: space_descriptor("torus", 2)),
        "plancherel_zero_target": plancherel_zero,
        "domain_cells_and_volume": domain_volume,
        "empty_network_zero_error": empty_network,
        "raw_relu_rejected": lambda: raises(lambda: _check_hypothesis(relu())),
        "relu_second_difference_accepted": lambda: finite_difference(relu(), 2, 1.0).is_bounded_lipschitz,
        "step_first_difference_accepted": lambda: finite_difference(step(), 1, 1.0).is_bounded_lipschitz,
        "tanh_accepted": lambda: tanh().is_bounded_lipschitz,
        "fractional_laplacian_r0_rejected": lambda: raises(lambda: fractional_laplacian(gaussian(), 0)),
        "cholesky_example": cholesky_example,
    }
    results = {}
    for name, fn in checks.items():
        try:
            results[name] = bool(fn())
        except Exception as exc:  # a crash is a failed check
            log.info("selfcheck %s raised %r", name, exc)
            results[name] = False
    return results


def cmd_selfcheck(cfg, out, timer):
    with timer("battery"):
        results = _selfcheck_battery()
    _write_rows(os.path.join(out, "selfcheck.csv"), ["check", "passed"],
                [(k, int(v)) for k, v in results.items()])
    failed = [k for k, v in results.items() if not v]
    if failed:
        raise SelfCheckFailed(f"failed checks: {', '.join(failed)}")
    return {"checks": len(results), "passed": len(results)}, ["selfcheck.csv"]


class SelfCheckFailed(SymRidgeError):
    category = "selfcheck"
    exit_code = 1


COMMANDS = {
    "transform": cmd_transform,
    "plancherel": cmd_plancherel,
    "reconstruct": cmd_reconstruct,
    "ridgelet-dump": cmd_ridgelet_dump,
    "universality": cmd_universality,
    "selfcheck": cmd_selfcheck,
}


# ---------------------------------------------------------------------------
# driver


class _Timer:
    def __init__(self):
        self.stages = {}

    def __call__(self, name):
        timer = self

        class _Stage:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                dt = time.perf_counter() - self.t0
                timer.stages[name] = timer.stages.get(name, 0.0) + dt
                log.info("%s: %.2f s", name, dt)

        return _Stage()


def _versions() -> dict:
    import scipy

    return {"symridge": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def run(subcommand: str, config: str | None = None, out: str | None = None,
        threads: int | None = None) -> tuple[int, dict]:
    """Run one experiment in-process.

    Returns
    -------
    status : int
        Process exit status (0, 1, 2 or 3).
    report : dict
        The document written to ``report.json``.
    """
    t0 = time.perf_counter()
    report = {"subcommand": subcommand, "status": "error", "versions": _versions()}
    out_dir = out
    try:
        if subcommand not in COMMANDS:
            raise ConfigurationError(f"unknown subcommand {subcommand!r}", field="subcommand")
        if threads is not None:
            if int(threads) < 1:
                raise ConfigurationError("must be >= 1", field="--threads")
            set_threads(int(threads))
        cfg = load_config(config)
        if out is not None:
            cfg = dataclasses.replace(cfg, out=out)
        out_dir = cfg.out
        report["config"] = cfg.to_dict()
        report["config_source"] = cfg.source
        os.makedirs(out_dir, exist_ok=True)
        timer = _Timer()
        metrics, files = COMMANDS[subcommand](cfg, out_dir, timer)
        report.update(status="ok", metrics=metrics, files=files + ["report.json"],
                      timing={"total_seconds": time.perf_counter() - t0, "stages": timer.stages})
        status = 0
    except SymRidgeError as exc:
        report["error"] = {"category": exc.category, "field": getattr(exc, "field", None),
                           "message": str(exc)}
        report["timing"] = {"total_seconds": time.perf_counter() - t0}
        print(json.dumps({"error": report["error"]}), file=sys.stderr)
        status = exc.exit_code
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "report.json"), "w") as fh:
            json.dump(_jsonable(report), fh, indent=2, sort_keys=True)
    return status, report


def _parser():
    p = argparse.ArgumentParser(
        prog="python3 -m symridge",
        description="Ridgelet transforms and finite networks on symmetric spaces.",
        epilog="Shipped configs: " + ", ".join(shipped_configs()))
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="config file path or shipped config name")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--threads", type=int, help="worker cap; results do not depend on it")
    p.add_argument("--verbose", action="store_true", help="log stage timings to stderr")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    status, report = run(args.subcommand, args.config, args.out, args.threads)
    if status == 0 and args.verbose:
        print(json.dumps(_jsonable(report["metrics"]), indent=2), file=sys.stderr)
    return status
