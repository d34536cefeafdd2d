"""Aperiodic autocorrelation and sidelobe metrics for unit-modulus sequences.

All transforms use a 2N-point DFT with kernel ``exp(-2j*pi*m*n/(2N))``,
unnormalized forward and ``1/(2N)`` on the inverse, i.e. exactly the
``numpy.fft`` convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DB_FLOOR = -200.0


class NumericalConsistencyError(ArithmeticError):
    """A quantity that must be real (or positive) came out otherwise."""


@dataclass(frozen=True)
class UnitModulusSequence:
    """A length-N sequence ``x_n = exp(1j * phases[n])``."""

    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if phases.ndim != 1:
            raise ValueError("phases must be one-dimensional")
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        object.__setattr__(self, "phases", phases)

    @property
    def N(self) -> int:
        return self.phases.size

    @property
    def x(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    @classmethod
    def from_complex(cls, x) -> "UnitModulusSequence":
        return cls(np.angle(np.asarray(x, dtype=complex)))

    def __len__(self):
        return self.N


def as_complex(seq) -> np.ndarray:
    """Return the complex samples of `seq` (a sequence object or complex array)."""
    if isinstance(seq, UnitModulusSequence):
        return seq.x
    x = np.asarray(seq)
    if x.ndim != 1:
        raise ValueError("sequence must be one-dimensional")
    return x.astype(complex, copy=False)


class SpectrumWorkspace:
    """Size-2N transform pair with a call counter.

    One workspace per thread of execution; the counter is plain mutable state.
    """

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        self.N = int(N)
        self.size = 2 * self.N
        self.calls = 0

    def forward(self, v: np.ndarray) -> np.ndarray:
        """Unnormalized DFT; inputs shorter than 2N are zero-padded."""
        self.calls += 1
        return np.fft.fft(v, self.size)

    def inverse(self, v: np.ndarray) -> np.ndarray:
        self.calls += 1
        return np.fft.ifft(v, self.size)

    def reset(self):
        self.calls = 0


def real_checked(v: np.ndarray, scale: float, what: str = "value") -> np.ndarray:
    """Drop the imaginary part of a mathematically real array.

    Raises :class:`NumericalConsistencyError` if the residue exceeds
    ``1e-8 * scale``.
    """
    v = np.asarray(v)
    if np.iscomplexobj(v):
        resid = np.max(np.abs(v.imag)) if v.size else 0.0
        if not resid <= 1e-8 * max(scale, np.finfo(float).tiny):
            raise NumericalConsistencyError(
                f"{what} has imaginary residue {resid:.3e} (scale {scale:.3e})"
            )
        return v.real.copy()
    return v.astype(float, copy=False)


def _spectral_autocorr(x: np.ndarray, ws: SpectrumWorkspace):
    """Return (f, r2) with f = F[x; 0] and r2 the full length-2N correlation vector."""
    f = ws.forward(x)
    r2 = ws.inverse(f.real**2 + f.imag**2)
    return f, r2


def autocorrelation(seq, workspace: SpectrumWorkspace | None = None) -> np.ndarray:
    """Aperiodic autocorrelation ``r_k = sum_n conj(x_n) x_{n+k}``, k = 0..N-1.

    Computed with two 2N-point transforms. ``r[0]`` is returned as an exactly
    real value.
    """
    x = as_complex(seq)
    N = x.size
    ws = workspace or SpectrumWorkspace(N)
    _, r2 = _spectral_autocorr(x, ws)
    energy = float(np.sum(x.real**2 + x.imag**2))
    if abs(r2[N]) > 1e-9 * max(1.0, energy / N):
        raise NumericalConsistencyError(f"structural zero at lag N is {abs(r2[N]):.3e}")
    r = r2[:N].copy()
    r[0] = real_checked(r[0], max(energy, 1.0), "r_0")
    return r


def autocorr_direct(seq) -> np.ndarray:
    """O(N^2) literal evaluation of the aperiodic autocorrelation."""
    x = as_complex(seq)
    N = x.size
    r = np.empty(N, dtype=complex)
    for k in range(N):
        r[k] = np.sum(np.conj(x[: N - k]) * x[k:])
    return r


def _sidelobes(profile) -> np.ndarray:
    r = np.asarray(profile)
    if r.ndim != 1 or r.size < 1:
        raise ValueError("profile must be a non-empty 1-D array")
    return np.abs(r[1:])


def isl(profile) -> float:
    """Integrated sidelobe level, the sum of ``|r_k|^2`` over k >= 1."""
    a = _sidelobes(profile)
    return float(np.dot(a, a))


def psl(profile) -> float:
    """Peak sidelobe level, ``max |r_k|`` over k >= 1."""
    a = _sidelobes(profile)
    return float(a.max()) if a.size else 0.0


def check_weights(weights, N: int | None = None, allow_zero: bool = False) -> np.ndarray:
    """Validate a lag-weight vector ``w_1..w_{N-1}`` and return it as floats."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1:
        raise ValueError("weights must be one-dimensional")
    if N is not None and w.size != N - 1:
        raise ValueError(f"expected {N - 1} weights for N={N}, got {w.size}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and nonnegative")
    if not allow_zero and not np.any(w > 0):
        raise ValueError("at least one weight must be positive")
    return w


def wisl(profile, weights) -> float:
    """Weighted ISL, ``sum_k w_k |r_k|^2``."""
    a = _sidelobes(profile)
    w = check_weights(weights, allow_zero=True)
    if w.size != a.size:
        raise ValueError(f"profile has {a.size} sidelobes but {w.size} weights were given")
    return float(np.dot(w, a * a))


def lp_norm(values, p: float) -> float:
    """Overflow-safe ``(sum |v|^p)^(1/p)``."""
    v = np.abs(np.asarray(values))
    m = v.max() if v.size else 0.0
    if m == 0.0:
        return 0.0
    return float(m * np.sum((v / m) ** p) ** (1.0 / p))


def lp_metric(profile, p: float) -> float:
    """The l_p norm of the sidelobe magnitudes, p >= 2."""
    if not p >= 2:
        raise ValueError("p must be >= 2")
    return lp_norm(_sidelobes(profile), p)


def correlation_level(profile, floor: float = DB_FLOOR) -> np.ndarray:
    """``20 log10 |r_k / r_0|`` for lags 1-N..N-1 (length 2N-1).

    Zero-magnitude lags map to `floor`.
    """
    r = np.asarray(profile)
    r0 = abs(r[0])
    if r0 == 0:
        raise ValueError("r_0 is zero")
    mag = np.abs(r) / r0
    with np.errstate(divide="ignore"):
        db = np.where(mag > 0, 20.0 * np.log10(np.where(mag > 0, mag, 1.0)), floor)
    db = np.maximum(db, floor)
    return np.concatenate([db[:0:-1], db])
