"""Experiment drivers that emit plot-ready CSV data.

Each experiment writes CSV and JSON only; plotting is left to the caller.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import fileio, seqlib
from .corr import autocorrelation, correlation_level, lp_metric, psl
from .solvers import SolverConfig, run_solver

log = logging.getLogger(__name__)

EXPERIMENTS = ("wisl-zone", "psl-sweep", "p-compare")
DEFAULT_SWEEP_M = (5, 7, 10, 20, 30, 50, 70, 100)
P_COMPARE_VALUES = (10, 100, 1000, 10000)


def wisl_zone(out_dir, seed: int = 0, max_iter: int = 10**6, floor: float = 1e-10,
              corr_floor: float = 1e-12):
    """Zero-correlation-zone design, N=100, lags 1-20 and 51-70.

    Writes one convergence trace per (method, accelerate) pair, the weight
    file, and the correlation level of the accelerated MWISL-Diag design
    driven to `corr_floor`.
    """
    out = Path(out_dir)
    N = 100
    w = seqlib.zone_weights(N)
    fileio.write_weights(out / "weights.txt", w)
    summary = {}
    for method in ("mwisl", "mwisl-diag"):
        for acc in (False, True):
            name = f"{method}{'-acc' if acc else ''}"
            cfg = SolverConfig(method=method, N=N, weights=w, max_iter=max_iter, rel_tol=1e-300,
                               abs_floor=floor, accelerate=acc, seed=seed)
            seq, rec = run_solver(cfg)
            fileio.write_convergence(out / f"{name}.csv", rec)
            summary[name] = {"iterations": rec.iterations, "wisl": rec.final,
                             "seconds": rec.wall_seconds}
            log.info("%s: %d iterations, %.3g s", name, rec.iterations, rec.wall_seconds)
    cfg = SolverConfig(method="mwisl-diag", N=N, weights=w, max_iter=max_iter, rel_tol=1e-300,
                       abs_floor=corr_floor, accelerate=True, seed=seed)
    seq, rec = run_solver(cfg)
    fileio.write_phases(out / "mwisl-diag-acc.phases", seq)
    fileio.write_correlation_level(out / "correlation_level.csv",
                                   correlation_level(autocorrelation(seq)))
    summary["correlation_design"] = {"wisl": rec.final, "iterations": rec.iterations}
    fileio.write_json(out / "summary.json", summary)
    return summary


def _sweep_one(args):
    M, max_iter, adaptive_cap, p = args
    N = M * M
    row = {"N": N,
           "golomb": psl(autocorrelation(seqlib.golomb(N))),
           "frank": psl(autocorrelation(seqlib.frank(M)))}
    for init, col in (("golomb", "mm_psl_g"), ("frank", "mm_psl_f")):
        cfg = SolverConfig(method="mm-psl", N=N, p=p, max_iter=max_iter, rel_tol=1e-10,
                           accelerate=True, init=init)
        seq, _ = run_solver(cfg)
        row[col] = psl(autocorrelation(seq))
    cfg = SolverConfig(method="mm-psl-adaptive", N=N, max_iter=adaptive_cap, rel_tol=1e-10,
                       accelerate=True, init="frank")
    seq, _ = run_solver(cfg)
    row["mm_psl_adaptive"] = psl(autocorrelation(seq))
    return row


def psl_sweep(out_dir, lengths_m=DEFAULT_SWEEP_M, max_iter: int = 2 * 10**5,
              adaptive_cap: int = 5000, p: float = 100.0, threads: int | None = None):
    """PSL versus length for Golomb, Frank and the three MM-PSL variants."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    threads = threads or int(os.environ.get("SEQFORGE_THREADS", "1"))
    jobs = [(int(M), max_iter, adaptive_cap, p) for M in lengths_m]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(j) for j in jobs]
    cols = ["N", "golomb", "frank", "mm_psl_g", "mm_psl_f", "mm_psl_adaptive"]
    with (out / "psl_sweep.csv").open("w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for r in rows:
            fh.write(",".join(str(r["N"]) if c == "N" else f"{r[c]:.10g}" for c in cols) + "\n")
    return rows


def p_compare(out_dir, N: int = 400, p_values=P_COMPARE_VALUES, max_iter: int = 5 * 10**4):
    """PSL and l_p traces of accelerated MM-PSL from a Frank start, one CSV per p."""
    out = Path(out_dir)
    M = int(round(np.sqrt(N)))
    if M * M != N:
        raise ValueError("p-compare needs a square N")
    result = {}
    for p in p_values:
        psl_trace = []

        def track(_, x, __):
            psl_trace.append(psl(autocorrelation(x)))

        cfg = SolverConfig(method="mm-psl", N=N, p=float(p), max_iter=max_iter, rel_tol=1e-300,
                           accelerate=True, init="frank")
        seq, rec = run_solver(cfg, callback=track)
        fileio.write_convergence(out / f"p{int(p)}.csv", rec, extra={"psl": psl_trace})
        result[p] = {"final_psl": psl_trace[-1], "final_lp": rec.final,
                     "lp_check": lp_metric(autocorrelation(seq), p)}
    fileio.write_json(out / "summary.json", {str(k): v for k, v in result.items()})
    return result


def run(experiment: str, out_dir, **kwargs):
    if experiment == "wisl-zone":
        return wisl_zone(out_dir, **kwargs)
    if experiment == "psl-sweep":
        return psl_sweep(out_dir, **kwargs)
    if experiment == "p-compare":
        return p_compare(out_dir, **kwargs)
    raise ValueError(f"unknown experiment {experiment!r}; choose from {EXPERIMENTS}")
