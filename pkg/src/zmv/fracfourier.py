"""The fractional part, its dyadic difference rho(x) - rho(2x), and Fourier partial sums.

The sine series

    rho(x) - rho(2x) = sum_{n>=1} (sin 4n pi x - sin 2n pi x) / (n pi)

converges pointwise (to the midpoint at jumps) with uniformly bounded partial
sums; :func:`partial_sum_sup` measures that bound on a grid.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from zmv.errors import BoundExceeded

# (1/2 + 1/sqrt(2)) mod 1: keeps sweep grids off the dyadic rationals
DEFAULT_GRID_OFFSET = (0.5 + 1.0 / math.sqrt(2.0)) % 1.0
DEFAULT_SUP_BOUND = 2.0
SEED_OFFSET_ENV = "ZMV_SEED_OFFSET"


def grid_offset() -> float:
    """Fractional grid offset, overridable through ``ZMV_SEED_OFFSET``."""
    raw = os.environ.get(SEED_OFFSET_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_GRID_OFFSET
    value = float(raw)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{SEED_OFFSET_ENV} must lie in (0, 1), got {raw!r}")
    return value


@dataclass(frozen=True)
class PartialSumSpec:
    n_terms: int
    x: float

    def __post_init__(self) -> None:
        if self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        if not self.x > 0:
            raise ValueError("x must be positive")


def rho(x: float) -> float:
    """Fractional part x - floor(x) for finite x >= 0."""
    if not (x >= 0 and math.isfinite(x)):
        raise ValueError("rho expects a finite non-negative x")
    return x - math.floor(x)


def telescoped(x: float) -> float:
    """rho(x) - rho(2x)."""
    if not x > 0:
        raise ValueError("x must be positive")
    return rho(x) - rho(2.0 * x)


def _sin2pi(y: np.ndarray) -> np.ndarray:
    # sin(2 pi y), folded so multiples of 1/2 give exact zeros
    v = 2.0 * np.mod(y, 1.0)
    sign = np.where(v >= 1.0, -1.0, 1.0)
    v = np.where(v >= 1.0, v - 1.0, v)
    v = np.where(v > 0.5, 1.0 - v, v)
    return sign * np.sin(np.pi * v)


def fourier_partial_sum(spec: PartialSumSpec) -> float:
    """S_N(x) = sum_{n=1}^N (sin 4n pi x - sin 2n pi x)/(n pi), ascending n, Kahan-summed."""
    n = np.arange(1, spec.n_terms + 1, dtype=np.float64)
    x = spec.x
    # reduce n*x mod 1 exactly enough: x in [0,1) keeps n*x well below 2^53
    xr = x - math.floor(x)
    terms = (_sin2pi(2.0 * n * xr) - _sin2pi(n * xr)) / (n * np.pi)
    total = 0.0
    comp = 0.0
    for t in terms.tolist():
        y = t - comp
        u = total + y
        comp = (u - total) - y
        total = u
    return total


def offset_grid(points: int, offset: float | None = None) -> np.ndarray:
    """``points`` abscissae (j + offset)/points in (0, 1)."""
    off = grid_offset() if offset is None else offset
    return (np.arange(points, dtype=np.float64) + off) / points


def partial_sums_table(n_max: int, xs: np.ndarray, block: int = 256) -> np.ndarray:
    """Running maximum of |S_N(x)| over N <= n_max, per x.

    Terms are generated in blocks of ``block`` indices; inside a block the
    prefix sums are plain cumulative sums, and block totals are carried with
    Kahan compensation so the running sum stays order-stable.
    """
    xs = np.asarray(xs, dtype=np.float64)
    xr = xs - np.floor(xs)
    total = np.zeros_like(xr)
    comp = np.zeros_like(xr)
    peak = np.zeros_like(xr)
    for start in range(1, n_max + 1, block):
        n = np.arange(start, min(start + block, n_max + 1), dtype=np.float64)[:, None]
        # offset grids never land on a zero of the sines: skip the exact fold
        theta = (2.0 * math.pi) * np.mod(n * xr, 1.0)
        terms = (np.sin(2.0 * theta) - np.sin(theta)) / (n * math.pi)
        prefix = np.cumsum(terms, axis=0)
        np.maximum(peak, np.abs(total + (prefix - comp)).max(axis=0), out=peak)
        y = prefix[-1] - comp
        u = total + y
        comp = (u - total) - y
        total = u
    return peak


def sample_points(count: int, margin: float = 0.02, offset: float | None = None) -> np.ndarray:
    """``count`` non-dyadic points in (0, 1) at least ``margin`` away from 0, 1/2 and 1.

    rho(x) - rho(2x) jumps at the half-integers, where Fourier convergence is
    not uniform; pointwise-rate studies sample away from them.
    """
    u = offset_grid(count, offset)
    width = 0.5 - 2.0 * margin
    return np.where(u < 0.5, margin + 2.0 * u * width, 0.5 + margin + 2.0 * (u - 0.5) * width)


def partial_sum_sup(
    n_max: int,
    grid_points: int,
    bound: float = DEFAULT_SUP_BOUND,
    offset: float | None = None,
) -> float:
    """max over N in 1..n_max and the offset grid of |S_N(x)|.

    Raises BoundExceeded when the sup is above ``bound``; the sums are
    mathematically bounded, so that can only mean a bug.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if grid_points < 256:
        raise ValueError("grid_points must be >= 256")
    sup = float(partial_sums_table(n_max, offset_grid(grid_points, offset)).max())
    if sup > bound:
        raise BoundExceeded(f"sup |S_N| = {sup:.6g} exceeds bound {bound:g}")
    return sup
