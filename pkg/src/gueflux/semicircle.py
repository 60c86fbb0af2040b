"""Semicircle law on [-1, 1]: density, CDF, quantiles and classical locations."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from gueflux.errors import DomainError

QUANTILE_TOL = 1e-12


def _check_unit(x, name="x"):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0) or np.any(np.isnan(x)):
        raise DomainError(f"{name} must lie in [-1, 1]")
    return x


def _maybe_scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def density(x):
    """sigma(x) = (2/pi) sqrt(1 - x^2)."""
    x = _check_unit(x)
    return _maybe_scalar(2.0 / np.pi * np.sqrt(1.0 - x * x))


def _cdf(x):
    return 0.5 + (x * np.sqrt(1.0 - x * x) + np.arcsin(x)) / np.pi


def cdf(x):
    """G(x) = integral of sigma over [-1, x], in closed form."""
    x = _check_unit(x)
    return _maybe_scalar(np.clip(_cdf(x), 0.0, 1.0))


def mean_antiderivative(y):
    """Antiderivative of y * sigma(y): -(2 / (3 pi)) (1 - y^2)^(3/2)."""
    y = np.asarray(y, dtype=float)
    return -2.0 / (3.0 * np.pi) * (1.0 - y * y) ** 1.5


def _solve_quantiles(p, tol=QUANTILE_TOL, max_iter=200):
    # safeguarded Newton: bracket maintained by bisection, Newton step
    # rejected whenever it leaves the bracket or sigma vanishes
    p = np.asarray(p, dtype=float)
    lo = np.full(p.shape, -1.0)
    hi = np.full(p.shape, 1.0)
    x = np.zeros(p.shape)
    for _ in range(max_iter):
        r = _cdf(x) - p
        if np.all(np.abs(r) <= tol):
            break
        above = r > 0
        hi = np.where(above, x, hi)
        lo = np.where(above, lo, x)
        s = 2.0 / np.pi * np.sqrt(np.maximum(1.0 - x * x, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - r / s
        ok = (s > 0) & (newton > lo) & (newton < hi)
        x = np.where(np.abs(r) <= tol, x, np.where(ok, newton, 0.5 * (lo + hi)))
    else:
        raise RuntimeError("quantile iteration did not converge")
    return x


def quantile(p):
    """G^{-1}(p); the endpoints 0 and 1 map to -1 and +1 exactly."""
    p = np.asarray(p, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)) or np.any(np.isnan(p)):
        raise DomainError("p must lie in [0, 1]")
    out = np.empty(p.shape)
    out[p == 0.0] = -1.0
    out[p == 1.0] = 1.0
    inner = (p > 0.0) & (p < 1.0)
    if np.any(inner):
        out[inner] = _solve_quantiles(p[inner])
    return _maybe_scalar(out)


@dataclass(frozen=True, eq=False)
class SemicirclePartition:
    """Classical locations gamma_0..gamma_N and per-cell data.

    ``cell_mean[j-1]`` is N times the integral of y*sigma(y) over cell j and
    ``cell_density[j-1]`` is sigma(gamma_j), for j = 1..N.
    """

    n: int
    gamma: np.ndarray
    cell_mean: np.ndarray
    cell_density: np.ndarray

    def cell_index(self, x):
        """0-based cell index i with gamma[i] < x <= gamma[i+1]."""
        x = np.asarray(x, dtype=float)
        if np.any(x <= -1.0) or np.any(x > 1.0):
            raise DomainError("x must lie in (-1, 1]")
        return np.searchsorted(self.gamma, x, side="left") - 1


@lru_cache(maxsize=64)
def build_partition(n):
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    half = n // 2
    gamma = np.empty(n + 1)
    j = np.arange(half + 1)
    gamma[: half + 1] = quantile(j / n)
    gamma[n - half :] = -gamma[: half + 1][::-1]
    if n % 2 == 0:
        gamma[half] = 0.0
    gamma[0], gamma[n] = -1.0, 1.0

    cell_mean = n * np.diff(mean_antiderivative(gamma))
    cell_mean = np.clip(cell_mean, gamma[:-1], gamma[1:])
    cell_density = 2.0 / np.pi * np.sqrt(1.0 - gamma[1:] ** 2)
    for a in (gamma, cell_mean, cell_density):
        a.setflags(write=False)
    return SemicirclePartition(n, gamma, cell_mean, cell_density)
