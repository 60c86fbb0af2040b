"""Scaled GUE spectra.

The ensemble has density proportional to exp(-Tr H^2) and we return the
ordered eigenvalues of H / sqrt(2N), whose empirical law tends to the
semicircle on [-1, 1]. Under the other common weight exp(-(N/2) Tr H'^2),
H' = sqrt(2/N) H, so those eigenvalues are 2 * lambda here.

Two samplers share this output contract:

* ``dense``: Hermitian matrix with diagonal N(0, 1/2) and off-diagonal
  real/imaginary parts N(0, 1/4), diagonalized with LAPACK.
* ``tridiag``: the beta = 2 tridiagonal model. With diagonal a_i ~ N(0, 1)
  and off-diagonal b_i = sqrt(Gamma(i, 1)), i = N-1, ..., 1, the matrix
  T / (2 sqrt(N)) has the same eigenvalue law. (b_i^2 = chi^2_{2i} / 2, which
  matches E|H_jk|^2 = 1/2; dividing by 2 sqrt(N) = sqrt(2N) * sqrt(2)
  converts the unit-variance model to the weight above.)
"""

from dataclasses import dataclass

import numpy as np

from gueflux import kernels
from gueflux.errors import ConvergenceError, ResourceLimitError
from gueflux.rng import GUE_STREAM, replica_rng

DENSE_CAP = 512
SAMPLERS = ("dense", "tridiag")


@dataclass(frozen=True, eq=False)
class Spectrum:
    n: int
    lam: np.ndarray
    seed: int
    sampler: str
    replica: int = 0

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.shape != (self.n,):
            raise ValueError("lam must have length n")
        if not np.all(np.isfinite(lam)):
            raise ValueError("eigenvalues must be finite")
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return int(n)


def dense_matrix(n, rng):
    """GUE(n) matrix with weight exp(-Tr H^2) (not yet rescaled)."""
    h = np.empty((n, n), dtype=complex)
    re = rng.standard_normal((n, n)) * 0.5
    im = rng.standard_normal((n, n)) * 0.5
    iu = np.triu_indices(n, 1)
    h[iu] = re[iu] + 1j * im[iu]
    h.T[iu] = np.conj(h[iu])
    h[np.diag_indices(n)] = rng.standard_normal(n) * np.sqrt(0.5)
    return h


def tridiag_entries(n, rng):
    """Diagonal and off-diagonal of the scaled tridiagonal model."""
    scale = 1.0 / (2.0 * np.sqrt(n))
    d = rng.standard_normal(n) * scale
    e = np.sqrt(rng.standard_gamma(np.arange(n - 1, 0, -1, dtype=float))) * scale
    return d, e


def sample_dense(n, seed, replica=0):
    n = _check_n(n)
    if n > DENSE_CAP:
        raise ResourceLimitError(f"dense sampler is capped at n <= {DENSE_CAP}")
    h = dense_matrix(n, replica_rng(seed, replica, GUE_STREAM))
    lam = np.linalg.eigvalsh(h / np.sqrt(2.0 * n))
    return Spectrum(n, np.sort(lam), seed, "dense", replica)


def sample_tridiag(n, seed, replica=0):
    n = _check_n(n)
    d, e = tridiag_entries(n, replica_rng(seed, replica, GUE_STREAM))
    try:
        lam = kernels.tql_eigvals(d, e)
    except ConvergenceError as exc:
        raise ConvergenceError(f"{exc} (seed={seed}, replica={replica})") from exc
    return Spectrum(n, lam, seed, "tridiag", replica)


def sample(n, seed, replica=0, sampler="tridiag"):
    if sampler == "dense":
        return sample_dense(n, seed, replica)
    if sampler == "tridiag":
        return sample_tridiag(n, seed, replica)
    raise ValueError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")


def sample_selected(n, seed, indices, replica=0):
    """Only the eigenvalues at 0-based ``indices`` of one tridiagonal replica.

    Same random stream as ``sample_tridiag``, so the values agree with
    ``sample_tridiag(n, seed, replica).lam[indices]`` up to solver rounding.
    """
    n = _check_n(n)
    d, e = tridiag_entries(n, replica_rng(seed, replica, GUE_STREAM))
    return kernels.bisect_eigvals(d, e, np.asarray(indices, dtype=np.int64))


def sample_many(n, seed, replicas, sampler="tridiag", start=0):
    """(replicas, n) array of sorted spectra for replica indices start, start+1, ..."""
    out = np.empty((replicas, n))
    for r in range(replicas):
        out[r] = sample(n, seed, start + r, sampler).lam
    return out


def counting_function(spec, x):
    """#{j : lambda_j < x}; vectorized over x."""
    lam = spec.lam if isinstance(spec, Spectrum) else np.asarray(spec)
    c = np.searchsorted(lam, x, side="left")
    return int(c) if np.ndim(c) == 0 else c
