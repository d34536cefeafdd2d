"""Command-line entry point: ``seqforge gen | eval | design | bench``."""
from __future__ import annotations

import argparse
import json
import logging
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bench, fileio, seqlib
from .corr import (NumericalConsistencyError, autocorrelation, check_weights,
                   correlation_level, isl, lp_metric, psl, wisl)
from .solvers import INITS, METHODS, SolverConfig, run_solver

log = logging.getLogger("seqforge")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def metrics(seq, weights=None, p=None) -> dict:
    r = autocorrelation(seq)
    out = {"n": len(seq), "isl": isl(r), "psl": psl(r)}
    if weights is not None:
        out["wisl"] = wisl(r, weights)
    if p is not None:
        out["lp"] = lp_metric(r, p)
    return out


def cmd_gen(kind: str, out: Path, n=None, m=None, seed: int = 0) -> Path:
    if kind == "frank":
        if m is None:
            if n is None or round(np.sqrt(n)) ** 2 != n:
                raise ConfigError("frank needs --m, or a square --n")
            m = round(np.sqrt(n))
        seq = seqlib.frank(m)
    elif kind == "golomb":
        if n is None:
            raise ConfigError("golomb needs --n")
        seq = seqlib.golomb(n)
    elif kind == "random":
        if n is None:
            raise ConfigError("random needs --n")
        seq = seqlib.random_unimodular(n, seed)
    else:
        raise ConfigError(f"unknown sequence kind {kind!r}")
    return fileio.write_phases(out, seq)


def cmd_eval(in_path: Path, out: Path | None = None, weights_path=None, p=None) -> dict:
    """Write a metrics JSON and a correlation-level CSV next to it."""
    seq = fileio.read_phases(in_path)
    weights = fileio.read_weights(weights_path) if weights_path else None
    if weights is not None and weights.size != seq.N - 1:
        raise ConfigError(f"weights are for N={weights.size + 1}, sequence has N={seq.N}")
    out = Path(out) if out else Path(in_path).with_suffix(".metrics.json")
    level_path = _sibling(out, ".corr.csv")
    result = metrics(seq, weights, p)
    fileio.write_correlation_level(level_path, correlation_level(autocorrelation(seq)))
    result["correlation_level_path"] = str(level_path)
    fileio.write_json(out, result)
    return result


def _config_to_dict(cfg: SolverConfig) -> dict:
    return {
        "method": cfg.method, "N": cfg.N, "p": cfg.p, "p_schedule": list(cfg.p_schedule),
        "max_iter": cfg.max_iter, "rel_tol": cfg.rel_tol, "abs_floor": cfg.abs_floor,
        "accelerate": cfg.accelerate, "seed": cfg.seed, "init": cfg.init,
        "weights": None if cfg.weights is None else np.asarray(cfg.weights).tolist(),
        "init_sequence": None if cfg.init_sequence is None
        else np.asarray(cfg.init_sequence).tolist(),
    }


def config_from_dict(d: dict) -> SolverConfig:
    d = dict(d)
    known = set(SolverConfig.__dataclass_fields__)
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if d.get("weights") is not None:
        d["weights"] = np.asarray(d["weights"], dtype=float)
    if d.get("init_sequence") is not None:
        d["init_sequence"] = np.asarray(d["init_sequence"], dtype=float)
    if "p_schedule" in d:
        d["p_schedule"] = tuple(float(v) for v in d["p_schedule"])
    return SolverConfig(**d)


def cmd_design(cfg: SolverConfig, out: Path) -> dict:
    """Run the solver; write phases, convergence CSV and a manifest."""
    try:
        cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    t0 = time.perf_counter()
    seq, rec = run_solver(cfg)
    elapsed = time.perf_counter() - t0
    out = Path(out)
    paths = {
        "sequence": str(fileio.write_phases(out, seq)),
        "convergence": str(fileio.write_convergence(_sibling(out, ".convergence.csv"), rec)),
    }
    p = cfg.p if cfg.method == "mm-psl" else (
        cfg.p_schedule[-1] if cfg.method == "mm-psl-adaptive" else None)
    final = metrics(seq, cfg.weights if cfg.method.startswith("mwisl") else None, p)
    manifest = {
        "config": _config_to_dict(cfg),
        "versions": {"seqforge": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
        "seed": cfg.seed,
        "timings": {"wall_seconds": elapsed, "solver_seconds": rec.wall_seconds},
        "iterations": rec.iterations,
        "converged": rec.converged,
        "outputs": paths,
        "metrics": final,
    }
    manifest_path = _sibling(out, ".manifest.json")
    manifest["outputs"]["manifest"] = str(manifest_path)
    fileio.write_json(manifest_path, manifest)
    return manifest


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seqforge", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="write a Frank, Golomb or random sequence")
    g.add_argument("kind", choices=("frank", "golomb", "random"))
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)

    e = sub.add_parser("eval", help="metrics and correlation level of a sequence file")
    e.add_argument("--in", dest="in_path", type=Path, required=True)
    e.add_argument("--weights", type=Path)
    e.add_argument("--p", type=float)
    e.add_argument("--out", type=Path)

    d = sub.add_parser("design", help="run a solver")
    d.add_argument("--config", type=Path, help="JSON config; flags given explicitly override it")
    d.add_argument("--method", choices=METHODS)
    d.add_argument("--n", type=int)
    d.add_argument("--p", type=float)
    d.add_argument("--p-schedule", help="comma-separated p values")
    d.add_argument("--weights", type=Path)
    d.add_argument("--init", choices=INITS)
    d.add_argument("--init-file", type=Path, help="phase file for --init file")
    d.add_argument("--seed", type=int)
    d.add_argument("--max-iter", type=int)
    d.add_argument("--rel-tol", type=float)
    d.add_argument("--abs-floor", type=float)
    d.add_argument("--accelerate", action="store_true", default=None)
    d.add_argument("--out", type=Path, required=True)

    b = sub.add_parser("bench", help="regenerate experiment data as CSV")
    b.add_argument("--experiment", required=True)
    b.add_argument("--out", type=Path, required=True)
    b.add_argument("--m", type=int, nargs="+", help="psl-sweep: Frank orders M (N = M^2)")
    b.add_argument("--max-iter", type=int)
    b.add_argument("--seed", type=int)
    return ap


def _design_config(a) -> SolverConfig:
    base = fileio.read_json(a.config) if a.config else {}
    overrides = {"method": a.method, "N": a.n, "p": a.p, "init": a.init, "seed": a.seed,
                 "max_iter": a.max_iter, "rel_tol": a.rel_tol, "abs_floor": a.abs_floor,
                 "accelerate": a.accelerate}
    base.update({k: v for k, v in overrides.items() if v is not None})
    if a.p_schedule:
        base["p_schedule"] = [float(s) for s in a.p_schedule.split(",")]
    if a.weights:
        base["weights"] = fileio.read_weights(a.weights)
    if a.init_file:
        seq = fileio.read_phases(a.init_file)
        base["init_sequence"] = seq.phases
        base.setdefault("init", "file")
        base.setdefault("N", seq.N)
    cfg = config_from_dict(base)
    if cfg.method.startswith("mwisl") and cfg.weights is None:
        cfg.weights = np.ones(cfg.N - 1)
    if cfg.weights is not None:
        cfg.weights = check_weights(cfg.weights, cfg.N)
    return cfg


def main(argv=None) -> int:
    a = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if a.verb == "gen":
            print(cmd_gen(a.kind, a.out, a.n, a.m, a.seed))
        elif a.verb == "eval":
            print(json.dumps(cmd_eval(a.in_path, a.out, a.weights, a.p), indent=2))
        elif a.verb == "design":
            m = cmd_design(_design_config(a), a.out)
            print(json.dumps(m["metrics"], indent=2))
        else:
            if a.experiment not in bench.EXPERIMENTS:
                raise ConfigError(f"unknown experiment {a.experiment!r}; "
                                  f"choose from {', '.join(bench.EXPERIMENTS)}")
            kw = {}
            if a.max_iter is not None:
                kw["max_iter"] = a.max_iter
            if a.m and a.experiment == "psl-sweep":
                kw["lengths_m"] = a.m
            if a.seed is not None and a.experiment == "wisl-zone":
                kw["seed"] = a.seed
            bench.run(a.experiment, a.out, **kw)
            print(a.out)
    except NumericalConsistencyError as exc:
        print(f"seqforge: numerical consistency error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, OSError) as exc:
        print(f"seqforge: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
