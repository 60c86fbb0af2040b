"""Eigenvalue fluctuation field X_N, counting field, and their coefficients.

X_N is piecewise constant on the cells (gamma_{j-1}, gamma_j] with value
N sigma(gamma_j) (lambda_j - cell_mean_j). Because sigma(gamma_N) = sigma(1)
= 0, the last cell is always 0 whatever lambda_N is; this follows the
definition literally.

Coefficients never use quadrature: U_k = T_{k+1}' / (k+1), so the integral of
U_k over a cell is (T_{k+1}(right) - T_{k+1}(left)) / (k+1).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from gueflux import kernels
from gueflux.chebyshev import ChebCoeffSeq
from gueflux.errors import DomainError
from gueflux.gue import Spectrum
from gueflux.moments import expected_cheb_trace
from gueflux.semicircle import SemicirclePartition, build_partition, cdf

CENTERINGS = ("semicircle", "ensemble_mean")


@dataclass(frozen=True, eq=False)
class FluctuationField:
    partition: SemicirclePartition
    values: np.ndarray


def _lam(spec):
    return spec.lam if isinstance(spec, Spectrum) else np.asarray(spec, dtype=float)


def cell_weights(part, weighting="density"):
    """Per-cell gap normalization.

    ``density``: N sigma(gamma_j), the definition of X_N.
    ``cell_width``: 1 / (gamma_j - gamma_{j-1}), i.e. N times the average of
    sigma over the cell. Comparison variant only: it treats both spectral
    edges alike, whereas the right-endpoint density is large at the inner
    end of the left edge cells and zero in the last cell.
    """
    if weighting == "density":
        return part.n * part.cell_density
    if weighting == "cell_width":
        return 1.0 / np.diff(part.gamma)
    raise ValueError(f"unknown weighting {weighting!r}")


def field_values(lam, part, weighting="density"):
    """Field levels for one spectrum (1-d) or a batch of spectra (2-d, one per row)."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1] != part.n:
        raise ValueError(f"spectrum size {lam.shape[-1]} does not match partition size {part.n}")
    return cell_weights(part, weighting) * (lam - part.cell_mean) + 0.0  # no -0.0 in the dead last cell


def build_field(spec, part, weighting="density"):
    values = field_values(_lam(spec), part, weighting)
    values.setflags(write=False)
    return FluctuationField(part, values)


def field_eval(f, x):
    """Value of X_N at x in (-1, 1]; cells are left-open, right-closed."""
    idx = f.partition.cell_index(x)
    v = f.values[idx]
    return float(v) if np.ndim(v) == 0 else v


def antiderivative_weights(edges, kmax):
    """W[i, k] = (2/pi) (T_{k+1}(edges[i+1]) - T_{k+1}(edges[i])) / (k+1).

    For a piecewise-constant function with level v_i on (edges[i], edges[i+1]],
    its coefficients s_0..s_kmax are ``v @ W``.
    """
    t = kernels.cheb_table(np.asarray(edges, dtype=float), kmax + 1, kind=1)[:, 1:]
    return 2.0 / np.pi * np.diff(t, axis=0) / np.arange(1, kmax + 2)


@lru_cache(maxsize=32)
def _partition_weights(n, kmax):
    w = antiderivative_weights(build_partition(n).gamma, kmax)
    w.setflags(write=False)
    return w


def coeff_matrix(part, kmax):
    if part is build_partition(part.n):
        return _partition_weights(part.n, kmax)
    return antiderivative_weights(part.gamma, kmax)


def field_coeffs(f, kmax):
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    return ChebCoeffSeq(f.values @ coeff_matrix(f.partition, kmax))


def batch_field_coeffs(lam, part, kmax, weighting="density"):
    """Coefficient rows s_0..s_kmax of X_N for each spectrum row of ``lam``."""
    return field_values(lam, part, weighting) @ coeff_matrix(part, kmax)


def sobolev_norm(c, alpha):
    """sqrt(sum_k s_k^2 (1 + k^2)^alpha) over the retained coefficients."""
    s = c.coeffs if isinstance(c, ChebCoeffSeq) else np.asarray(c, dtype=float)
    k = np.arange(s.shape[-1])
    return np.sqrt(np.sum(s * s * (1.0 + k * k) ** alpha, axis=-1))


def sobolev_distance(a, b, alpha):
    a = a.coeffs if isinstance(a, ChebCoeffSeq) else np.asarray(a, dtype=float)
    b = b.coeffs if isinstance(b, ChebCoeffSeq) else np.asarray(b, dtype=float)
    k = min(a.shape[-1], b.shape[-1])
    return sobolev_norm(a[..., :k] - b[..., :k], alpha)


@dataclass(frozen=True, eq=False)
class CountingField:
    grid: np.ndarray
    raw_counts: np.ndarray
    centering: str
    centered_values: np.ndarray


def mean_counting_table(spectra, grid):
    """Pooled Monte Carlo estimate of E #{j : lambda_j < x} on ``grid``.

    Rows are averaged in the given (replica) order. No leave-one-out
    correction, so each replica's own counts bias its centering by O(1/M).
    """
    lam = np.atleast_2d(np.asarray(spectra, dtype=float))
    counts = np.stack([np.searchsorted(row, grid, side="left") for row in lam])
    return counts.mean(axis=0)


def build_counting_field(spec, grid, centering="ensemble_mean", center_table=None):
    lam = _lam(spec)
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted")
    if np.any(np.abs(grid) >= 1):
        raise DomainError("grid points must lie inside (-1, 1)")
    raw = np.searchsorted(lam, grid, side="left")
    if centering == "semicircle":
        center = lam.size * cdf(grid)
    elif centering == "ensemble_mean":
        if center_table is None:
            raise ValueError("ensemble_mean centering needs a center_table")
        center = np.asarray(center_table, dtype=float)
        if center.shape != grid.shape:
            raise ValueError("center_table must match the grid")
    else:
        raise ValueError(f"unknown centering {centering!r}; expected one of {CENTERINGS}")
    return CountingField(grid, raw, centering, raw - center)


def counting_coeffs_raw(lam, kmax):
    """Exact coefficients of the raw count x -> #{j : lambda_j < x} on [-1, 1].

    The count is a step function jumping by one at each eigenvalue, so
    s_k = (2/pi) sum_j (T_{k+1}(1) - T_{k+1}(clip(lambda_j))) / (k+1).
    Eigenvalues outside [-1, 1] are clipped to the interval.
    Accepts one spectrum or a batch (one per row).
    """
    lam = np.clip(np.asarray(lam, dtype=float), -1.0, 1.0)
    flat = lam.reshape(-1)
    t = kernels.cheb_table(flat, kmax + 1, kind=1)[:, 1:].reshape(lam.shape + (kmax + 1,))
    k1 = np.arange(1, kmax + 2)
    return 2.0 / np.pi * (t.shape[-2] * 1.0 - t.sum(axis=-2)) / k1


def counting_center_coeffs(lam_batch, kmax, method="control_variate"):
    """Estimate of E s_k(raw count) from a pool of spectra (one per row).

    ``pooled`` is the plain replica average, i.e. the coefficients of the
    pooled mean counting function. ``control_variate`` splits the raw
    coefficient into the unclipped linear statistic
    (2/pi)(N - sum_j T_{k+1}(lambda_j)) / (k+1), whose mean is known exactly
    from the moment recursion, plus the clipping correction for eigenvalues
    outside [-1, 1], which alone is averaged over the pool. Both estimate the
    same ensemble mean; the second has far smaller Monte Carlo error.
    """
    lam = np.atleast_2d(np.asarray(lam_batch, dtype=float))
    raw = counting_coeffs_raw(lam, kmax)
    if method == "pooled":
        return raw.mean(axis=0)
    if method != "control_variate":
        raise ValueError(f"unknown centering method {method!r}")
    n = lam.shape[1]
    k1 = np.arange(1, kmax + 2)
    tsum = kernels.cheb_table(lam.reshape(-1), kmax + 1, kind=1)[:, 1:].reshape(lam.shape + (kmax + 1,)).sum(axis=1)
    unclipped = 2.0 / np.pi * (n - tsum) / k1
    exact = np.array([2.0 / np.pi * (n - (k + 1) * expected_cheb_trace(k, n)) / (k + 1) for k in range(kmax + 1)])
    return exact + (raw - unclipped).mean(axis=0)


def counting_coeffs(lam_batch, kmax, center_coeffs=None, method="control_variate"):
    """Coefficients of the centered counting field for each spectrum row.

    Extraction is linear, so centering by the ensemble-mean counting function
    is the same as subtracting its coefficient row, estimated from the batch
    itself unless ``center_coeffs`` is given.
    """
    raw = counting_coeffs_raw(lam_batch, kmax)
    if center_coeffs is None:
        center_coeffs = counting_center_coeffs(lam_batch, kmax, method)
    return raw - center_coeffs
