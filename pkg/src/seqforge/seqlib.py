"""Closed-form polyphase sequences and seeded random initialization."""
from __future__ import annotations

import numpy as np

from .corr import UnitModulusSequence

#: Bit generator behind :func:`random_unimodular`. PCG64 output for a given
#: seed is fixed across platforms and numpy releases.
BIT_GENERATOR = "PCG64"


def frank(M: int) -> UnitModulusSequence:
    """Frank sequence of length ``M**2``: ``x[n*M + k] = exp(2j*pi*n*k/M)``."""
    M = int(M)
    if M < 1:
        raise ValueError("M must be >= 1")
    n, k = np.divmod(np.arange(M * M), M)
    # reduce n*k mod M in integers so large M keeps full phase precision
    return UnitModulusSequence(2.0 * np.pi * ((n * k) % M) / M)


def golomb(N: int) -> UnitModulusSequence:
    """Golomb polyphase sequence ``x_n = exp(1j*pi*(n-1)*n/N)``, n = 1..N."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1, N + 1, dtype=np.int64)
    return UnitModulusSequence(np.pi * (((n - 1) * n) % (2 * N)) / N)


def random_unimodular(N: int, seed: int) -> UnitModulusSequence:
    """I.i.d. phases uniform on [0, 2*pi) from ``numpy.random.PCG64(seed)``."""
    N = int(N)
    if N < 2:
        raise ValueError("N must be >= 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    return UnitModulusSequence(2.0 * np.pi * rng.random(N))


def barker13() -> UnitModulusSequence:
    """The length-13 binary Barker code as phases in {0, pi}."""
    signs = np.array([1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1])
    return UnitModulusSequence(np.where(signs > 0, 0.0, np.pi))


def zone_weights(N: int = 100, lags=((1, 20), (51, 70))) -> np.ndarray:
    """Unit weights on the inclusive lag ranges in `lags`, zero elsewhere."""
    w = np.zeros(N - 1)
    for lo, hi in lags:
        w[lo - 1:hi] = 1.0
    return w
