"""Tempo distributions: histograms, the spline-smoothed CDF density, Gaussian KDE.

The smoothed density works on the cumulative side: bin the data, take the
cumulative proportion at each bin centre, pad with a 0 just left of the first
edge and a 1 just right of the last, interpolate with a zero-slope clamped
cubic spline and differentiate. Negative slopes (spline undershoot) are
clipped to zero and the result is *not* renormalised.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .spline import ClampedSpline, eval_spline_derivative, fit_clamped_spline

DEFAULT_BINS = 28
DEFAULT_PDF_POINTS = 400
DEFAULT_EPSILON = 1e-3
DEFAULT_JITTER = 0.5
DEFAULT_BANDWIDTH_FACTOR = 0.07
DEFAULT_KDE_RANGE = (0.0, 265.0)
DEFAULT_KDE_POINTS = 800

# below this many observations the cumulative curve is too coarse to trust
MIN_RELIABLE_OBSERVATIONS = 50


@dataclass(frozen=True, eq=False)
class HistogramResult:
    edges: np.ndarray
    counts: np.ndarray
    centres: np.ndarray

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def density_heights(self) -> np.ndarray:
        """Bar heights ``count / (N * width)`` so the bars integrate to 1."""
        return self.counts / (self.total * self.widths)


@dataclass(frozen=True, eq=False)
class EcdfResult:
    """Cumulative proportions at bin centres, padded with the 0 and 1 end points."""

    xs: np.ndarray
    Fs: np.ndarray

    def __post_init__(self) -> None:
        if self.xs.shape != self.Fs.shape:
            raise DomainError("xs and Fs differ in length")
        if np.any(np.diff(self.Fs) < 0):
            raise DomainError("cumulative proportions must be non-decreasing")
        if self.Fs[0] != 0.0 or self.Fs[-1] != 1.0:
            raise DomainError("cumulative proportions must run from 0 to 1")


@dataclass(frozen=True, eq=False)
class SplinePdf:
    grid: np.ndarray
    density: np.ndarray
    spline: ClampedSpline | None = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class KdeCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float


def _as_data(data: Sequence[float]) -> np.ndarray:
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("no observations")
    if not np.all(np.isfinite(arr)):
        raise DomainError("observations must be finite")
    return arr


def jitter(data: Sequence[float], amplitude: float = DEFAULT_JITTER, seed: int = 0) -> np.ndarray:
    """Add independent uniform noise on ``[-amplitude, amplitude]`` to every value.

    Uses numpy's PCG64 generator seeded with ``seed``, so results are
    reproducible. A zero amplitude returns the values unchanged.
    """
    if amplitude < 0:
        raise DomainError(f"jitter amplitude must be non-negative, got {amplitude}")
    arr = np.array(data, dtype=float).ravel()
    if amplitude == 0 or arr.size == 0:
        return arr
    rng = np.random.default_rng(seed)
    return arr + rng.uniform(-amplitude, amplitude, size=arr.size)


def histogram(data: Sequence[float], n_bins: int = DEFAULT_BINS) -> HistogramResult:
    """Equal-width bins over ``[min, max]``; the last bin is closed on both sides.

    All-equal data get their range widened by ``max(0.5, |value| * 1e-6)``
    on each side.
    """
    arr = _as_data(data)
    if int(n_bins) != n_bins or n_bins < 1:
        raise DomainError(f"n_bins must be a positive integer, got {n_bins!r}")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        pad = max(0.5, abs(lo) * 1e-6)
        lo, hi = lo - pad, hi + pad
    counts, edges = np.histogram(arr, bins=int(n_bins), range=(lo, hi))
    centres = 0.5 * (edges[:-1] + edges[1:])
    return HistogramResult(edges, counts.astype(np.int64), centres)


def empirical_cdf(hist: HistogramResult, epsilon: float = DEFAULT_EPSILON) -> EcdfResult:
    """Cumulative share of observations through each bin, placed at the bin centres.

    The point ``(edges[0] - epsilon, 0)`` is prepended and
    ``(edges[-1] + epsilon, 1)`` appended.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    total = int(hist.counts.sum())
    if total <= 0:
        raise DomainError("histogram is empty; cannot form a cumulative distribution")
    cum = np.cumsum(hist.counts).astype(float)
    fs = cum / cum[-1]
    xs = np.concatenate([[hist.edges[0] - epsilon], hist.centres, [hist.edges[-1] + epsilon]])
    return EcdfResult(xs, np.concatenate([[0.0], fs, [1.0]]))


def spline_pdf(
    data: Sequence[float],
    n_bins: int = DEFAULT_BINS,
    grid_points: int = DEFAULT_PDF_POINTS,
    epsilon: float = DEFAULT_EPSILON,
    jitter_amplitude: float = DEFAULT_JITTER,
    seed: int = 0,
) -> tuple[HistogramResult, SplinePdf]:
    """Histogram plus spline-smoothed density for one set of tempo values.

    The grid runs over ``[edges[0], edges[-1]]`` inclusive. Emits a
    ``UserWarning`` for fewer than 50 observations but still computes.
    """
    arr = _as_data(data)
    if arr.size < MIN_RELIABLE_OBSERVATIONS:
        warnings.warn(
            f"only {arr.size} observations; the smoothed density is unreliable below "
            f"{MIN_RELIABLE_OBSERVATIONS}",
            UserWarning,
            stacklevel=2,
        )
    if int(grid_points) != grid_points or grid_points < 2:
        raise DomainError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    hist = histogram(jitter(arr, jitter_amplitude, seed), n_bins)
    ecdf = empirical_cdf(hist, epsilon)
    spline = fit_clamped_spline(ecdf.xs, ecdf.Fs)
    grid = np.linspace(hist.edges[0], hist.edges[-1], int(grid_points))
    density = np.maximum(eval_spline_derivative(spline, grid), 0.0)
    return hist, SplinePdf(grid, density, spline)


def population_std(data: Sequence[float]) -> float:
    arr = np.asarray(data, dtype=float)
    return float(np.sqrt(np.mean((arr - arr.mean()) ** 2)))


_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def gaussian_kde(
    data: Sequence[float],
    bandwidth_factor: float = DEFAULT_BANDWIDTH_FACTOR,
    grid_min: float = DEFAULT_KDE_RANGE[0],
    grid_max: float = DEFAULT_KDE_RANGE[1],
    grid_points: int = DEFAULT_KDE_POINTS,
) -> KdeCurve:
    """Gaussian kernel density on an equispaced grid.

    The bandwidth is ``bandwidth_factor`` times the population standard
    deviation of ``data``.
    """
    arr = _as_data(data)
    if arr.size < 2:
        raise DomainError("kernel density needs at least 2 observations")
    if not bandwidth_factor > 0:
        raise DomainError(f"bandwidth factor must be positive, got {bandwidth_factor}")
    if not grid_min < grid_max:
        raise DomainError(f"grid_min ({grid_min}) must be below grid_max ({grid_max})")
    if int(grid_points) != grid_points or grid_points < 2:
        raise DomainError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    spread = population_std(arr)
    if spread == 0:
        raise DomainError("all observations are equal; kernel bandwidth would be zero")
    h = bandwidth_factor * spread
    grid = np.linspace(grid_min, grid_max, int(grid_points))
    density = np.empty_like(grid)
    # chunk the grid so the (grid x data) matrix stays small for long series
    step = max(1, 2_000_000 // arr.size)
    for i in range(0, grid.size, step):
        z = (grid[i : i + step, None] - arr[None, :]) / h
        density[i : i + step] = np.exp(-0.5 * z * z).sum(axis=1)
    density *= _INV_SQRT_2PI / (arr.size * h)
    return KdeCurve(grid, density, h)

