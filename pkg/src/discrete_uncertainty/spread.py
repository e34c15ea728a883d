"""Spread measures for signals on the centered grid.

The main measure is the circular variance

    v_x = min_a  sum_j d(j, a)^2 |x(j)|^2 / ||x||^2,

minimized over centers ``a`` in ``(-sqrt(N)/2, sqrt(N)/2]``.  The angular
(Breitenberger-type) spread, l0 sparsity and Shannon entropy are provided
for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from .errors import ComputationError
from .signal import GridSpec, Signal, circular_distance, dft

__all__ = [
    "Measure",
    "Domain",
    "SpreadReport",
    "circular_variance",
    "circular_variance_at",
    "piece_minima",
    "angular_spread",
    "sparsity",
    "entropy",
    "spread",
]

# Rows of the (pieces x points) matrix evaluated at once.
_CHUNK = 256


class Measure(str, Enum):
    CIRCULAR_VARIANCE = "circular_variance"
    ANGULAR = "angular"
    SPARSITY = "sparsity"
    ENTROPY = "entropy"


class Domain(str, Enum):
    TIME = "time"
    FREQUENCY = "frequency"


@dataclass(frozen=True)
class SpreadReport:
    mean: float | None
    variance: float
    measure: Measure
    domain: Domain = Domain.TIME

    def to_json(self) -> dict:
        return {
            "measure": self.measure.value,
            "domain": self.domain.value,
            "mean": self.mean,
            "value": self.variance,
        }


def _weights(x: Signal) -> NDArray[np.float64]:
    p = np.abs(x.values) ** 2
    total = p.sum()
    if total == 0:
        raise ComputationError("zero signal has no spread")
    return p / total


def _wrap_centered(d: NDArray[np.float64], period: float) -> NDArray[np.float64]:
    return np.mod(d + period / 2, period) - period / 2


def piece_minima(x: Signal) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Minimizer and minimum of the variance objective on each of the N pieces.

    Every antipode of a grid point is again a grid point, so the objective is
    a quadratic in ``a`` between consecutive grid points.  Piece ``k`` covers
    ``[m_k, m_k + 1] / sqrt(N)`` with ``m_k = -N/2 + k``.  Returned centers are
    wrapped into ``(-sqrt(N)/2, sqrt(N)/2]``.
    """
    grid = x.grid
    w = _weights(x)
    h = grid.spacing
    p = grid.period
    centers = (np.arange(grid.n) - grid.n // 2 + 0.5) * h
    js = grid.points
    best_a = np.empty(grid.n)
    best_v = np.empty(grid.n)
    for start in range(0, grid.n, _CHUNK):
        c = centers[start : start + _CHUNK]
        # unwrapped offsets of every grid point seen from the piece midpoint
        r = _wrap_centered(js[None, :] - c[:, None], p)
        shift = np.clip(r @ w, -h / 2, h / 2)
        best_v[start : start + _CHUNK] = ((r - shift[:, None]) ** 2) @ w
        best_a[start : start + _CHUNK] = c + shift
    return grid.wrap(best_a), best_v


def circular_variance(x: Signal, domain: Domain | str = Domain.TIME) -> SpreadReport:
    """Exact circular variance and mean of ``x``.

    Ties between several minimizing centers resolve to the smallest one.
    """
    a, v = piece_minima(x)
    vmin = v.min()
    tol = 64 * np.finfo(float).eps * max(x.grid.n / 4, 1.0)
    mean = float(a[v <= vmin + tol].min())
    value = circular_variance_at(x, mean)
    return SpreadReport(mean=mean, variance=value, measure=Measure.CIRCULAR_VARIANCE, domain=Domain(domain))


def circular_variance_at(x: Signal, a: float) -> float:
    """Normalized second moment of ``|x|^2`` about the center ``a``."""
    w = _weights(x)
    d = circular_distance(x.grid, x.grid.points, a)
    return float(np.dot(d * d, w))


def angular_spread(x: Signal, domain: Domain | str = Domain.TIME) -> SpreadReport:
    """Breitenberger-type spread after mapping ``j`` to the angle ``2*pi*j/sqrt(N)``.

    With ``tau`` the first circular moment of ``|x|^2``, the spread is
    ``(1 - |tau|^2) / |tau|^2``.  The reported mean is ``arg(tau)`` mapped
    back onto the grid's circle.
    """
    w = _weights(x)
    grid = x.grid
    tau = np.dot(w, np.exp(2j * np.pi * grid.points / grid.period))
    mod2 = abs(tau) ** 2
    if mod2 < 1e-24:
        raise ComputationError("angular spread undefined: zero first circular moment")
    mean = grid.wrap(np.angle(tau) * grid.period / (2 * np.pi))
    value = max((1.0 - mod2) / mod2, 0.0)
    return SpreadReport(mean=float(mean), variance=value, measure=Measure.ANGULAR, domain=Domain(domain))


def sparsity(x: Signal, threshold: float = 0.0, domain: Domain | str = Domain.TIME) -> SpreadReport:
    """Number of entries with ``|x(j)| > threshold``."""
    if not threshold >= 0:
        raise ValueError(f"threshold must be nonnegative, got {threshold}")
    count = int(np.count_nonzero(np.abs(x.values) > threshold))
    return SpreadReport(mean=None, variance=float(count), measure=Measure.SPARSITY, domain=Domain(domain))


def entropy(x: Signal, domain: Domain | str = Domain.TIME) -> SpreadReport:
    """Shannon entropy (natural log) of ``|x(j)|^2 / ||x||^2``."""
    w = _weights(x)
    nz = w[w > 0]
    value = float(-np.sum(nz * np.log(nz)))
    return SpreadReport(mean=None, variance=max(value, 0.0), measure=Measure.ENTROPY, domain=Domain(domain))


def spread(
    x: Signal,
    measure: Measure | str = Measure.CIRCULAR_VARIANCE,
    domain: Domain | str = Domain.TIME,
    threshold: float = 0.0,
) -> SpreadReport:
    """Evaluate ``measure`` on ``x`` (time) or on ``dft(x)`` (frequency)."""
    measure = Measure(measure)
    domain = Domain(domain)
    y = dft(x) if domain is Domain.FREQUENCY else x
    if measure is Measure.CIRCULAR_VARIANCE:
        return circular_variance(y, domain)
    if measure is Measure.ANGULAR:
        return angular_spread(y, domain)
    if measure is Measure.SPARSITY:
        return sparsity(y, threshold, domain)
    return entropy(y, domain)


def max_variance(grid: GridSpec) -> float:
    """Upper bound ``N/4`` on the circular variance."""
    return grid.n / 4
