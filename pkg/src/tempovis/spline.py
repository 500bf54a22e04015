"""Cubic interpolating spline with prescribed end slopes.

The spline is built from its second derivatives ``M`` at the knots, which
satisfy a symmetric, strictly diagonally dominant tridiagonal system; that
system is solved with the Thomas algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def solve_tridiagonal(lower, diag, upper, rhs) -> np.ndarray:
    """Solve a tridiagonal system by forward elimination and back substitution.

    ``lower[i]`` multiplies ``x[i-1]`` in row ``i`` (``lower[0]`` is ignored),
    ``upper[i]`` multiplies ``x[i+1]`` (``upper[-1]`` is ignored). No pivoting,
    so the matrix should be diagonally dominant.
    """
    n = len(diag)
    c = np.empty(n)
    d = np.empty(n)
    c[0] = upper[0] / diag[0] if n > 1 else 0.0
    d[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * c[i - 1]
        c[i] = upper[i] / denom if i < n - 1 else 0.0
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


@dataclass(frozen=True, eq=False)
class ClampedSpline:
    """Piecewise cubic ``S(x) = a + b t + c t^2 + d t^3`` with ``t = x - knots[i]``.

    ``coeffs`` has shape ``(len(knots) - 1, 4)`` holding ``a, b, c, d`` per
    interval.
    """

    knots: np.ndarray
    coeffs: np.ndarray
    start_slope: float = 0.0
    end_slope: float = 0.0

    def _locate(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if np.any(x < self.knots[0]) or np.any(x > self.knots[-1]):
            bad = x[(x < self.knots[0]) | (x > self.knots[-1])]
            raise DomainError(
                f"{bad.size} point(s) outside the knot range [{self.knots[0]:g}, {self.knots[-1]:g}], "
                f"e.g. {bad[0]:g}"
            )
        idx = np.searchsorted(self.knots, x, side="right") - 1
        idx = np.clip(idx, 0, len(self.knots) - 2)
        return idx, x - self.knots[idx]

    def __call__(self, x, nu: int = 0) -> np.ndarray:
        """Evaluate the spline (``nu=0``) or its first/second derivative."""
        x = np.asarray(x, dtype=float)
        idx, t = self._locate(np.atleast_1d(x))
        a, b, c, d = self.coeffs[idx].T
        if nu == 0:
            out = a + t * (b + t * (c + t * d))
        elif nu == 1:
            out = b + t * (2.0 * c + 3.0 * t * d)
        elif nu == 2:
            out = 2.0 * c + 6.0 * t * d
        else:
            raise ValueError("nu must be 0, 1 or 2")
        return out.reshape(x.shape)

    def derivative(self, x) -> np.ndarray:
        return self(x, nu=1)


def fit_clamped_spline(xs, ys, start_slope: float = 0.0, end_slope: float = 0.0) -> ClampedSpline:
    """Fit the cubic spline through ``(xs, ys)`` with fixed first derivatives at both ends.

    Args:
        xs: strictly increasing knot positions, at least 3 of them.
        ys: values at the knots.
        start_slope, end_slope: S'(xs[0]) and S'(xs[-1]); zero by default.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DomainError(f"xs and ys must be 1-D and equally long, got {x.shape} and {y.shape}")
    if x.size < 3:
        raise DomainError(f"need at least 3 knots, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("knots and values must be finite")
    h = np.diff(x)
    if np.any(h <= 0):
        i = int(np.argmax(h <= 0))
        raise DomainError(f"xs must be strictly increasing: xs[{i}]={x[i]:g}, xs[{i + 1}]={x[i + 1]:g}")

    slope = np.diff(y) / h
    n = x.size
    lower = np.zeros(n)
    upper = np.zeros(n)
    diag = np.empty(n)
    rhs = np.empty(n)

    diag[0] = 2.0 * h[0]
    upper[0] = h[0]
    rhs[0] = 6.0 * (slope[0] - start_slope)

    lower[1:-1] = h[:-1]
    diag[1:-1] = 2.0 * (h[:-1] + h[1:])
    upper[1:-1] = h[1:]
    rhs[1:-1] = 6.0 * (slope[1:] - slope[:-1])

    lower[-1] = h[-1]
    diag[-1] = 2.0 * h[-1]
    rhs[-1] = 6.0 * (end_slope - slope[-1])

    m = solve_tridiagonal(lower, diag, upper, rhs)

    coeffs = np.empty((n - 1, 4))
    coeffs[:, 0] = y[:-1]
    coeffs[:, 1] = slope - h * (2.0 * m[:-1] + m[1:]) / 6.0
    coeffs[:, 2] = m[:-1] / 2.0
    coeffs[:, 3] = (m[1:] - m[:-1]) / (6.0 * h)
    return ClampedSpline(x, coeffs, float(start_slope), float(end_slope))


def eval_spline_derivative(spline: ClampedSpline, grid) -> np.ndarray:
    """Analytic first derivative of ``spline`` at each grid point."""
    return spline.derivative(grid)
