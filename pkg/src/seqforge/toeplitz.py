"""Hermitian Toeplitz utilities built on the 2N circulant embedding.

A Hermitian Toeplitz matrix T with first column ``t_0..t_{N-1}`` embeds in a
2N x 2N circulant whose first column is

    c = [t_0, t_1, ..., t_{N-1}, 0, conj(t_{N-1}), ..., conj(t_1)].

The DFT ``mu = F c`` is real and gives both O(N log N) products with T and
cheap bounds on its extreme eigenvalues.

Index convention for the bounds: the bound pairs the maxima (or minima) over
the two interleaved halves of ``mu``. With the one-based ``mu_1 .. mu_2N``
stored as ``mu[0] .. mu[2N-1]``, the one-based even entries are ``mu[1::2]``
and the odd ones ``mu[0::2]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corr import SpectrumWorkspace, real_checked


@dataclass(frozen=True)
class HermitianToeplitzSpec:
    """First column ``t`` of an N x N Hermitian Toeplitz matrix."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=complex)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("t must be a non-empty 1-D array")
        if t[0].imag != 0:
            raise ValueError("t_0 must be real for a Hermitian matrix")
        object.__setattr__(self, "t", t)

    @property
    def N(self) -> int:
        return self.t.size


def embed(spec: HermitianToeplitzSpec) -> np.ndarray:
    """First column of the 2N circulant embedding of `spec`."""
    t = spec.t
    c = np.zeros(2 * t.size, dtype=complex)
    c[: t.size] = t
    c[t.size + 1:] = np.conj(t[:0:-1])
    return c


def spectrum(spec: HermitianToeplitzSpec, workspace: SpectrumWorkspace | None = None) -> np.ndarray:
    """Real DFT ``mu`` of the circulant embedding."""
    ws = workspace or SpectrumWorkspace(spec.N)
    mu = ws.forward(embed(spec))
    return real_checked(mu, max(float(np.sum(np.abs(spec.t))), 1e-300), "mu")


def eig_upper_bound(mu: np.ndarray) -> float:
    """Upper bound on the largest eigenvalue of T from its embedding spectrum."""
    mu = np.asarray(mu, dtype=float)
    return 0.5 * (mu[1::2].max() + mu[0::2].max())


def eig_lower_bound(mu: np.ndarray) -> float:
    """Lower bound on the smallest eigenvalue of T from its embedding spectrum."""
    mu = np.asarray(mu, dtype=float)
    return 0.5 * (mu[1::2].min() + mu[0::2].min())


def toeplitz_matvec(spec: HermitianToeplitzSpec, x, workspace: SpectrumWorkspace | None = None,
                    mu: np.ndarray | None = None) -> np.ndarray:
    """``T @ x`` via the circulant embedding (three transforms, two if `mu` is given)."""
    x = np.asarray(x, dtype=complex)
    if x.size != spec.N:
        raise ValueError(f"x has length {x.size}, expected {spec.N}")
    ws = workspace or SpectrumWorkspace(spec.N)
    if mu is None:
        mu = spectrum(spec, ws)
    return ws.inverse(mu * ws.forward(x))[: spec.N]
