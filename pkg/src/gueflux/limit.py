"""The limiting log-correlated field and its theoretical statistics."""

import math
from dataclasses import dataclass

import numpy as np

from gueflux import kernels
from gueflux.chebyshev import ChebCoeffSeq, kernel_closed
from gueflux.rng import LIMIT_STREAM, replica_rng

MAX_SERIES_TERMS = 10**8


@dataclass(frozen=True, eq=False)
class LimitFieldSample:
    coeffs: ChebCoeffSeq
    seed: int
    replica: int = 0

    @property
    def truncation(self):
        return self.coeffs.truncation


def _scales(K):
    return 1.0 / np.sqrt(np.arange(1, K + 2))


def sample_limit(K, seed, replica=0):
    """s_k = Y_k / sqrt(k+1) for k = 0..K with Y_k iid standard normal."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    y = replica_rng(seed, replica, LIMIT_STREAM).standard_normal(K + 1)
    return LimitFieldSample(ChebCoeffSeq(y * _scales(K)), seed, replica)


def sample_limit_batch(K, seed, replicas, start=0):
    """(replicas, K+1) coefficient rows; row r equals sample_limit(K, seed, start + r)."""
    out = np.empty((replicas, K + 1))
    sc = _scales(K)
    for r in range(replicas):
        out[r] = replica_rng(seed, start + r, LIMIT_STREAM).standard_normal(K + 1) * sc
    return out


def sample_values_batch(x, K, seed, replicas, start=0, chunk=4096):
    """(replicas, len(x)) truncated field values, generated in chunks of replicas.

    Row r equals limit_eval(sample_limit(K, seed, start + r), x); only
    ``chunk`` coefficient rows are held in memory at once.
    """
    b = basis_at(x, K)
    out = np.empty((replicas, b.shape[0]))
    for lo in range(0, replicas, chunk):
        hi = min(lo + chunk, replicas)
        out[lo:hi] = sample_limit_batch(K, seed, hi - lo, start + lo) @ b.T
    return out


def basis_at(x, K):
    """(len(x), K+1) matrix of U_k(x) sqrt(1 - x^2)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > 1):
        raise ValueError("x must lie in [-1, 1]")
    return kernels.cheb_table(x, K, kind=2) * np.sqrt(1.0 - x * x)[:, None]


def limit_eval(s, x):
    """Truncated series sum_{k<=K} s_k U_k(x) sqrt(1 - x^2)."""
    c = s.coeffs.coeffs if isinstance(s, LimitFieldSample) else np.asarray(s, dtype=float)
    v = basis_at(x, c.shape[-1] - 1) @ c.T
    return float(v[0]) if np.ndim(x) == 0 and v.ndim == 1 else v


def pointwise_variance(x, K):
    """Var of the truncated field at x: sum_{k<=K} U_k(x)^2 (1 - x^2) / (k+1)."""
    b = basis_at(x, K)
    return (b * b / np.arange(1, K + 2)).sum(axis=1)


def sobolev_tail_bound(alpha, K):
    """Upper bound on sum_{k>K} (1+k^2)^-alpha / (k+1), alpha > 0."""
    if alpha <= 0:
        return math.inf
    return max(K, 1) ** (-2.0 * alpha) / (2.0 * alpha) if K >= 1 else math.inf


def expected_sq_sobolev_norm(alpha, K=None, tol=1e-8):
    """E ||X||_{-alpha}^2 truncated at K, or the full series when K is None.

    The full series is summed until the tail bound drops below ``tol``.
    """
    if K is not None:
        k = np.arange(K + 1, dtype=float)
        return float(np.sum((1.0 + k * k) ** (-alpha) / (k + 1.0)))
    if alpha <= 0:
        raise ValueError("series diverges for alpha <= 0")
    m = math.ceil((1.0 / (2.0 * alpha * tol)) ** (1.0 / (2.0 * alpha)))
    if m > MAX_SERIES_TERMS:
        raise ValueError(f"alpha={alpha} needs more than {MAX_SERIES_TERMS} terms for tol={tol}")
    total = 0.0
    for lo in range(0, m + 1, 10**6):
        k = np.arange(lo, min(lo + 10**6, m + 1), dtype=float)
        total += float(np.sum((1.0 + k * k) ** (-alpha) / (k + 1.0)))
    return total


def limit_cov(x, y):
    """E X(x) X(y) = kernel_closed(x, y)."""
    return kernel_closed(x, y)
