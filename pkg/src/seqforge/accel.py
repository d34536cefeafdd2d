"""SQUAREM extrapolation for MM fixed-point maps on the unit-modulus set."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_BACKTRACKS = 64


@dataclass
class AccelState:
    """Result of one accelerated step."""

    x: np.ndarray
    f: float
    backtracks: int = 0
    map_calls: int = 0
    fell_back: bool = False


def _project(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    mag = np.abs(v)
    return np.where(mag > 0, v / np.where(mag > 0, mag, 1.0), fallback)


def squarem_step(mm_map, objective, x: np.ndarray, fx: float | None = None) -> AccelState:
    """One SQUAREM step around `mm_map`, keeping ``objective`` nonincreasing.

    Degenerate cases: a vanishing first difference returns ``mm_map(x)``; a
    vanishing second difference returns the plain double step. Step lengths
    shorter than the double step (``alpha > -1``) are clamped to ``alpha = -1``,
    and if 64 halvings toward -1 do not restore descent the double step is
    returned as is.
    """
    if fx is None:
        fx = objective(x)
    x1 = mm_map(x)
    r = x1 - x
    norm_r = np.linalg.norm(r)
    if norm_r < 1e-14 * np.sqrt(x.size):
        return AccelState(x1, objective(x1), map_calls=1)
    x2 = mm_map(x1)
    v = x2 - x1 - r
    norm_v = np.linalg.norm(v)
    if norm_v == 0.0:
        return AccelState(x2, objective(x2), map_calls=2, fell_back=True)

    alpha = min(-norm_r / norm_v, -1.0)
    backtracks = 0
    while True:
        cand = _project(x - 2.0 * alpha * r + alpha * alpha * v, x2)
        fc = objective(cand)
        if fc <= fx:
            return AccelState(cand, fc, backtracks=backtracks, map_calls=2)
        if alpha == -1.0 or backtracks >= MAX_BACKTRACKS:
            break
        alpha = (alpha - 1.0) / 2.0
        backtracks += 1
    f2 = objective(x2)
    return AccelState(x2, f2, backtracks=backtracks, map_calls=2, fell_back=True)
