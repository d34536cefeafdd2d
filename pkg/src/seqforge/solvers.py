"""Majorization-minimization iteration maps and the outer solver loop.

Three step maps are provided:

* :func:`mwisl_step` - weighted ISL with the scaled-identity majorizer,
* :func:`mwisl_diag_step` - weighted ISL with the diagonal majorizer,
* :func:`mm_psl_step` - l_p norm of the sidelobes (p >= 2).

Each step costs four 2N-point transforms and also returns the objective at its
input point, read off the autocorrelation it had to compute anyway.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import accel
from .corr import (
    NumericalConsistencyError,
    SpectrumWorkspace,
    _spectral_autocorr,
    as_complex,
    autocorrelation,
    check_weights,
    lp_norm,
    real_checked,
    UnitModulusSequence,
)
from .toeplitz import eig_lower_bound, eig_upper_bound

log = logging.getLogger(__name__)

METHODS = ("mwisl", "mwisl-diag", "mm-psl", "mm-psl-adaptive")
INITS = ("random", "frank", "golomb", "file")
DEFAULT_P_SCHEDULE = tuple(2.0**j for j in range(1, 14))
ADAPTIVE_MAX_ITER = 5000

# 16-point Gauss-Legendre rule on [0, 1], used for the curvature near |r_k| = t
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


def project_unit(y: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """Element-wise ``exp(1j*arg(y))``; entries with ``y == 0`` keep `fallback`."""
    mag = np.abs(y)
    out = np.empty_like(y)
    nz = mag > 0
    out[nz] = y[nz] / mag[nz]
    out[~nz] = fallback[~nz]
    return out


def _symmetric_extension(w: np.ndarray) -> np.ndarray:
    """``[0, w_1, ..., w_{N-1}, 0, w_{N-1}, ..., w_1]``."""
    return np.concatenate(([0.0], w, [0.0], w[::-1]))


def lambda_max_L(weights, N: int) -> float:
    """Closed-form largest eigenvalue of the lifted weight matrix: ``max_k w_k (N-k)``."""
    w = check_weights(weights, N)
    return float(np.max(w * (N - np.arange(1, N))))


# --------------------------------------------------------------------------
# weighted ISL
# --------------------------------------------------------------------------

def _weighted_spectrum(r2: np.ndarray, wext: np.ndarray, ws: SpectrumWorkspace):
    c = r2 * wext
    # rounding in r2 is absolute (~eps * N), so the tolerance carries an N term
    scale = float(np.sum(np.abs(c))) + ws.N * float(wext.max())
    return real_checked(ws.forward(c), scale, "mu")


def mwisl_step(x: np.ndarray, weights, lambda_L: float | None = None,
               workspace: SpectrumWorkspace | None = None, *, _wext=None):
    """One MWISL iteration. Returns ``(x_next, wisl(x))``."""
    x = as_complex(x)
    N = x.size
    ws = workspace or SpectrumWorkspace(N)
    if _wext is None:
        w = check_weights(weights, N)
        _wext = _symmetric_extension(w)
        if lambda_L is None:
            lambda_L = lambda_max_L(w, N)
    elif lambda_L is None:
        lambda_L = lambda_max_L(weights, N)

    f, r2 = _spectral_autocorr(x, ws)
    value = 0.5 * float(np.dot(_wext, r2.real**2 + r2.imag**2))
    mu = _weighted_spectrum(r2, _wext, ws)
    lam_u = eig_upper_bound(mu)
    denom = lambda_L * N + lam_u
    if not denom > 0:
        raise NumericalConsistencyError(f"majorizer scale {denom!r} is not positive")
    Rx = ws.inverse(mu * f)[:N]
    y = x - Rx / denom
    return project_unit(y, x), value


def precompute_diag(weights, N: int, workspace: SpectrumWorkspace | None = None):
    """Return ``(B @ 1, lambda_B)`` for the diagonal majorizer.

    ``B`` is the symmetric Toeplitz matrix with lag-k entry ``w_k (N-|k|)``;
    ``lambda_B`` is the spectral lower bound on its smallest eigenvalue.
    """
    w = check_weights(weights, N)
    ws = workspace or SpectrumWorkspace(N)
    k = np.arange(1, N)
    wt = _symmetric_extension(w * (N - k))
    nu = real_checked(ws.forward(wt), float(np.sum(wt)), "nu")
    ones_hat = ws.forward(np.ones(N))
    p_vec = real_checked(ws.inverse(nu * ones_hat)[:N], float(np.sum(wt)), "B1")
    return p_vec, eig_lower_bound(nu)


def mwisl_diag_step(x: np.ndarray, weights, p_vec: np.ndarray | None = None,
                    lambda_B: float | None = None,
                    workspace: SpectrumWorkspace | None = None, *, _wext=None):
    """One MWISL-Diag iteration. Returns ``(x_next, wisl(x))``."""
    x = as_complex(x)
    N = x.size
    ws = workspace or SpectrumWorkspace(N)
    if _wext is None:
        _wext = _symmetric_extension(check_weights(weights, N))
    if p_vec is None or lambda_B is None:
        p_vec, lambda_B = precompute_diag(weights, N, ws)

    f, r2 = _spectral_autocorr(x, ws)
    value = 0.5 * float(np.dot(_wext, r2.real**2 + r2.imag**2))
    mu = _weighted_spectrum(r2, _wext, ws)
    lam_u = eig_upper_bound(mu)
    denom = lam_u - lambda_B
    if not denom > 0:
        raise NumericalConsistencyError(f"majorizer scale {denom!r} is not positive")
    Rx = ws.inverse(mu * f)[:N]
    y = x + (p_vec * x - Rx) / denom
    return project_unit(y, x), value


# --------------------------------------------------------------------------
# l_p / PSL
# --------------------------------------------------------------------------

def _curvature(rho: np.ndarray, p: float) -> np.ndarray:
    """``[1 + (p-1) rho^p - p rho^(p-1)] / (1 - rho)^2`` for ``0 <= rho <= 1``.

    Close to ``rho = 1`` the closed form cancels catastrophically; there the
    equivalent integral ``p (p-1) * int_0^1 u (1 - eps u)^(p-2) du`` with
    ``eps = 1 - rho`` is used instead. At ``rho = 1`` both give ``p(p-1)/2``.
    """
    rho = np.clip(rho, 0.0, 1.0)
    eps = 1.0 - rho
    out = np.empty_like(rho)
    near = (p - 1.0) * eps <= 0.5
    if np.any(near):
        e = eps[near][:, None]
        integrand = _GL_NODES * (1.0 - e * _GL_NODES) ** (p - 2.0)
        out[near] = p * (p - 1.0) * (integrand @ _GL_WEIGHTS)
    far = ~near
    if np.any(far):
        rf = rho[far]
        num = 1.0 + (p - 1.0) * rf**p - p * rf ** (p - 1.0)
        out[far] = num / eps[far] ** 2
    return out


@dataclass
class MajorizerCoefficients:
    """Normalized (divided by ``t**p``) quadratic-majorizer data for one MM-PSL step."""

    a: np.ndarray
    b: np.ndarray
    w_hat: np.ndarray
    t: float
    lambda_L: float
    lambda_u: float = float("nan")


def psl_coefficients(mag: np.ndarray, p: float) -> MajorizerCoefficients:
    """Majorizer coefficients for sidelobe magnitudes ``|r_1|..|r_{N-1}|``.

    ``a_k`` is the curvature of the quadratic upper bound on ``z**p`` over
    ``[0, t]`` touching at ``|r_k|``, ``b_k`` its (nonpositive) linear
    coefficient and ``w_hat_k = a_k + b_k / (2|r_k|)``. All are scaled by
    ``t**-p`` with ``t`` the current l_p norm.
    """
    N = mag.size + 1
    t = lp_norm(mag, p)
    rho = mag / t
    a = _curvature(rho, p) / t**2
    w_hat = (0.5 * p / t**2) * rho ** (p - 2.0)
    b = (p * rho ** (p - 1.0)) / t - 2.0 * a * mag
    lam_L = float(np.max(a * (N - np.arange(1, N))))
    return MajorizerCoefficients(a=a, b=b, w_hat=w_hat, t=t, lambda_L=lam_L)


def mm_psl_step(x: np.ndarray, p: float, workspace: SpectrumWorkspace | None = None):
    """One MM iteration on the l_p norm of the sidelobes. Returns ``(x_next, lp(x))``.

    A sequence with all sidelobes zero is returned unchanged with value 0.
    """
    if not p >= 2:
        raise ValueError("p must be >= 2")
    x = as_complex(x)
    N = x.size
    ws = workspace or SpectrumWorkspace(N)

    f, r2 = _spectral_autocorr(x, ws)
    mag = np.abs(r2[1:N])
    if not np.any(mag > 0):
        return x.copy(), 0.0
    co = psl_coefficients(mag, p)
    mu = _weighted_spectrum(r2, _symmetric_extension(co.w_hat), ws)
    lam_u = eig_upper_bound(mu)
    denom = co.lambda_L * N + lam_u
    if not denom > 0:
        raise NumericalConsistencyError(f"majorizer scale {denom!r} is not positive")
    Rx = ws.inverse(mu * f)[:N]
    y = x - Rx / denom
    return project_unit(y, x), co.t


# --------------------------------------------------------------------------
# outer loop
# --------------------------------------------------------------------------

@dataclass
class SolverConfig:
    """Everything needed to reproduce a design run."""

    method: str = "mwisl-diag"
    N: int = 100
    weights: np.ndarray | None = None
    p: float = 100.0
    p_schedule: tuple = DEFAULT_P_SCHEDULE
    max_iter: int = 10000
    rel_tol: float = 1e-10
    abs_floor: float | None = None
    accelerate: bool = False
    seed: int = 0
    init: str = "random"
    init_sequence: np.ndarray | None = None

    def validate(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.init not in INITS:
            raise ValueError(f"unknown init {self.init!r}; choose from {INITS}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError("N must be an integer >= 2")
        if not self.max_iter >= 1:
            raise ValueError("max_iter must be >= 1")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.method in ("mwisl", "mwisl-diag"):
            if self.weights is None:
                raise ValueError(f"method {self.method} needs weights")
            check_weights(self.weights, self.N)
        if self.method == "mm-psl" and not self.p >= 2:
            raise ValueError("p must be >= 2")
        if self.method == "mm-psl-adaptive":
            s = np.asarray(self.p_schedule, dtype=float)
            if s.size == 0 or s[0] < 2 or np.any(np.diff(s) <= 0):
                raise ValueError("p_schedule must be strictly increasing and start at >= 2")
        if self.init == "file" and self.init_sequence is None:
            raise ValueError("init='file' requires init_sequence")


@dataclass
class ConvergenceRecord:
    """Per-iteration trace of one run.

    ``objective[l]`` is the objective at the l-th iterate, ``objective[0]`` at
    the initial point, so ``len(objective) == iterations + 1``. For the
    adaptive method ``p_values[l]`` records which p the entry refers to.
    """

    objective: list = field(default_factory=list)
    seconds: list = field(default_factory=list)
    backtracks: list = field(default_factory=list)
    p_values: list = field(default_factory=list)
    iterations: int = 0
    wall_seconds: float = 0.0
    residual: float = float("nan")
    converged: bool = False
    fallbacks: int = 0
    map_calls: int = 0

    @property
    def final(self) -> float:
        return self.objective[-1]


class _Problem:
    """Binds a method to a fixed length so the loop can call ``step`` / ``objective``."""

    def __init__(self, method: str, N: int, weights=None, p: float | None = None):
        self.method = method
        self.N = N
        self.ws = SpectrumWorkspace(N)
        if method in ("mwisl", "mwisl-diag"):
            self.w = check_weights(weights, N)
            self.wext = _symmetric_extension(self.w)
            if method == "mwisl":
                self.lambda_L = lambda_max_L(self.w, N)
            else:
                self.p_vec, self.lambda_B = precompute_diag(self.w, N, self.ws)
        else:
            if not p >= 2:
                raise ValueError("p must be >= 2")
            self.p = float(p)

    def step(self, x):
        if self.method == "mwisl":
            return mwisl_step(x, self.w, self.lambda_L, self.ws, _wext=self.wext)
        if self.method == "mwisl-diag":
            return mwisl_diag_step(x, self.w, self.p_vec, self.lambda_B, self.ws, _wext=self.wext)
        return mm_psl_step(x, self.p, self.ws)

    def objective(self, x) -> float:
        _, r2 = _spectral_autocorr(x, self.ws)
        if self.method in ("mwisl", "mwisl-diag"):
            return 0.5 * float(np.dot(self.wext, r2.real**2 + r2.imag**2))
        return lp_norm(r2[1: self.N], self.p)


def _rel_change(prev: float, cur: float) -> float:
    if prev == 0.0:
        return 0.0
    return abs(prev - cur) / prev


def iterate(problem: _Problem, x0: np.ndarray, max_iter: int, rel_tol: float,
            abs_floor: float | None = None, accelerate: bool = False,
            record: ConvergenceRecord | None = None, callback=None):
    """Run `problem` from `x0`; append to `record` and return ``(x, record)``.

    Stops when the relative objective change between consecutive iterates is
    at most `rel_tol`, when the objective drops to `abs_floor`, or after
    `max_iter` iterations (outer SQUAREM steps when accelerated).
    """
    rec = record if record is not None else ConvergenceRecord()
    x = as_complex(x0).copy()
    t0 = time.perf_counter()
    base = rec.seconds[-1] if rec.seconds else 0.0
    tag = getattr(problem, "p", None)

    def log_point(value, backtracks):
        rec.objective.append(value)
        rec.seconds.append(base + time.perf_counter() - t0)
        rec.backtracks.append(backtracks)
        rec.p_values.append(tag)
        if callback is not None:
            callback(len(rec.objective) - 1, x, value)

    if accelerate:
        fx = problem.objective(x)
        log_point(fx, 0)
        for it in range(max_iter):
            if abs_floor is not None and fx <= abs_floor:
                rec.converged = True
                break
            res = accel.squarem_step(lambda v: problem.step(v)[0], problem.objective, x, fx)
            rec.map_calls += res.map_calls
            rec.fallbacks += int(res.fell_back)
            rec.residual = float(np.max(np.abs(res.x - x)))
            x, prev, fx = res.x, fx, res.f
            rec.iterations += 1
            log_point(fx, res.backtracks)
            if _rel_change(prev, fx) <= rel_tol:
                rec.converged = True
                break
        rec.wall_seconds += time.perf_counter() - t0
        return x, rec

    x_new, fx = problem.step(x)
    rec.map_calls += 1
    rec.residual = float(np.max(np.abs(x_new - x)))
    log_point(fx, 0)
    stopped = False
    for it in range(max_iter):
        if abs_floor is not None and fx <= abs_floor:
            stopped = True
            break
        x = x_new
        rec.iterations += 1
        if it == max_iter - 1:
            break
        prev = fx
        x_new, fx = problem.step(x)
        rec.map_calls += 1
        rec.residual = float(np.max(np.abs(x_new - x)))
        log_point(fx, 0)
        if _rel_change(prev, fx) <= rel_tol:
            stopped = True
            break
    if stopped:
        rec.converged = True
    else:
        fx = problem.objective(x)
        log_point(fx, 0)
    rec.wall_seconds += time.perf_counter() - t0
    return x, rec


def initial_sequence(config: SolverConfig) -> np.ndarray:
    from . import seqlib

    N = int(config.N)
    if config.init == "random":
        seq = seqlib.random_unimodular(N, config.seed)
    elif config.init == "frank":
        M = int(round(np.sqrt(N)))
        if M * M != N:
            raise ValueError(f"frank init needs a square length, got N={N}")
        seq = seqlib.frank(M)
    elif config.init == "golomb":
        seq = seqlib.golomb(N)
    else:
        seq = config.init_sequence
        if isinstance(seq, UnitModulusSequence):
            seq = seq.x
        seq = np.asarray(seq)
        if not np.iscomplexobj(seq):
            seq = np.exp(1j * seq)
        if seq.size != N:
            raise ValueError(f"init sequence has length {seq.size}, expected N={N}")
        return project_unit(seq.astype(complex), np.ones(N, dtype=complex))
    return seq.x


def run_solver(config: SolverConfig, callback=None):
    """Run a full design. Returns ``(UnitModulusSequence, ConvergenceRecord)``.

    For ``mm-psl-adaptive`` each p in the schedule is run to a relative
    tolerance of ``1e-5 / p`` (rooted l_p objective) with at most
    ``min(5000, max_iter)`` iterations, warm-started from the previous p.
    """
    config.validate()
    x = initial_sequence(config)
    N = int(config.N)
    if config.method == "mm-psl-adaptive":
        rec = ConvergenceRecord()
        cap = min(ADAPTIVE_MAX_ITER, config.max_iter)
        for p in config.p_schedule:
            problem = _Problem("mm-psl", N, p=float(p))
            before = rec.iterations
            x, rec = iterate(problem, x, cap, 1e-5 / p, None, config.accelerate, rec, callback)
            log.info("p=%g: %d iterations, lp=%.6g", p, rec.iterations - before, rec.objective[-1])
        return UnitModulusSequence.from_complex(x), rec

    problem = _Problem(config.method, N, weights=config.weights, p=config.p)
    x, rec = iterate(problem, x, config.max_iter, config.rel_tol, config.abs_floor,
                     config.accelerate, callback=callback)
    log.info("%s: %d iterations, objective %.6g", config.method, rec.iterations, rec.final)
    return UnitModulusSequence.from_complex(x), rec


def objective_value(method: str, seq, weights=None, p: float | None = None) -> float:
    """The objective a method minimizes, evaluated at `seq`."""
    r = autocorrelation(seq)
    if method in ("mwisl", "mwisl-diag"):
        from .corr import wisl
        return wisl(r, weights)
    from .corr import lp_metric
    return lp_metric(r, p)
