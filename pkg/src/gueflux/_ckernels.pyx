# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: tridiagonal eigenvalues and Chebyshev tables.

Every function here has a line-for-line twin in ``_pykernels``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, copysign, sqrt

from gueflux.errors import ConvergenceError

cnp.import_array()

cdef double EPS = 2.220446049250313e-16


cdef double _gershgorin(const double[::1] d, const double[::1] e, double *lo, double *hi) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0], i
    cdef double r, a, b
    lo[0] = d[0]
    hi[0] = d[0]
    for i in range(n):
        r = 0.0
        if i > 0:
            r += fabs(e[i - 1])
        if i < n - 1:
            r += fabs(e[i])
        a = d[i] - r
        b = d[i] + r
        if a < lo[0]:
            lo[0] = a
        if b > hi[0]:
            hi[0] = b
    return hi[0] - lo[0]


def tql_eigvals(d_in, e_in, int max_iter=30):
    """Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.

    Parameters
    ----------
    d_in : (n,) array of diagonal entries.
    e_in : (n-1,) array of off-diagonal entries.

    Returns the eigenvalues sorted ascending. Raises ``ConvergenceError``
    if some eigenvalue needs more than ``max_iter`` QL sweeps.
    """
    cdef cnp.ndarray[double, ndim=1] dd = np.array(d_in, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = dd.shape[0]
    cdef cnp.ndarray[double, ndim=1] ee = np.zeros(max(n, 1), dtype=np.float64)
    if n == 0:
        return dd
    ee[:n - 1] = np.asarray(e_in, dtype=np.float64)
    cdef double[::1] d = dd
    cdef double[::1] e = ee
    cdef Py_ssize_t l, m, i
    cdef int it
    cdef double g, r, s, c, p, f, b, lo, hi, tol
    cdef bint underflow
    tol = EPS * _gershgorin(d, e, &lo, &hi)
    with nogil:
        for l in range(n):
            it = 0
            while True:
                m = l
                while m < n - 1:
                    if fabs(e[m]) <= tol:
                        break
                    m += 1
                if m == l:
                    break
                it += 1
                if it > max_iter:
                    with gil:
                        raise ConvergenceError(f"QL failed to converge at index {l}")
                g = (d[l + 1] - d[l]) / (2.0 * e[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + e[l] / (g + copysign(r, g))
                s = 1.0
                c = 1.0
                p = 0.0
                underflow = False
                i = m - 1
                while i >= l:
                    f = s * e[i]
                    b = c * e[i]
                    r = sqrt(f * f + g * g)
                    e[i + 1] = r
                    if r == 0.0:
                        d[i + 1] -= p
                        e[m] = 0.0
                        underflow = True
                        break
                    s = f / r
                    c = g / r
                    g = d[i + 1] - p
                    r = (d[i] - g) * s + 2.0 * c * b
                    p = s * r
                    d[i + 1] = g + p
                    g = c * r - b
                    i -= 1
                if underflow:
                    continue
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    dd.sort()
    return dd


cdef Py_ssize_t _sturm_count(const double[::1] d, const double[::1] e2, double x, double pivmin) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0], i, cnt = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        cnt += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            cnt += 1
    return cnt


def sturm_count(d_in, e_in, double x):
    """Number of eigenvalues strictly below ``x``."""
    cdef const double[::1] dd = np.ascontiguousarray(d_in, dtype=np.float64)
    cdef const double[::1] e2 = np.ascontiguousarray(np.square(e_in), dtype=np.float64)
    cdef double lo, hi, pivmin
    if dd.shape[0] == 0:
        return 0
    pivmin = 1e-300 + EPS * EPS * max(1.0, _gershgorin(dd, np.ascontiguousarray(np.abs(e_in), dtype=np.float64), &lo, &hi))
    return int(_sturm_count(dd, e2, x, pivmin))


def bisect_eigvals(d_in, e_in, indices):
    """Selected eigenvalues (0-based ascending ``indices``) by Sturm bisection."""
    cdef const double[::1] dd = np.ascontiguousarray(d_in, dtype=np.float64)
    cdef const double[::1] ea = np.ascontiguousarray(e_in, dtype=np.float64)
    cdef const double[::1] e2 = np.square(ea)
    cdef const long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t n = dd.shape[0], t, k
    cdef cnp.ndarray[double, ndim=1] out = np.empty(idx.shape[0], dtype=np.float64)
    cdef double glo, ghi, lo, hi, mid, width, pivmin
    if n == 0:
        raise ValueError("empty matrix")
    width = _gershgorin(dd, ea, &glo, &ghi)
    pivmin = 1e-300 + EPS * EPS * max(1.0, width)
    glo -= 2.0 * EPS * max(1.0, width)
    ghi += 2.0 * EPS * max(1.0, width)
    for t in range(idx.shape[0]):
        k = idx[t]
        if k < 0 or k >= n:
            raise IndexError(f"eigenvalue index {k} out of range for n={n}")
        lo = glo
        hi = ghi
        with nogil:
            while hi - lo > 2.0 * EPS * (fabs(lo) + fabs(hi)) + pivmin:
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                if _sturm_count(dd, e2, mid, pivmin) > k:
                    hi = mid
                else:
                    lo = mid
        out[t] = 0.5 * (lo + hi)
    return out


def cheb_table(x_in, int kmax, int kind=1):
    """Rows of T_0..T_kmax (kind=1) or U_0..U_kmax (kind=2) at each x."""
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    xa = np.ascontiguousarray(np.ravel(x_in), dtype=np.float64)
    cdef Py_ssize_t m = xa.shape[0], i, k
    cdef cnp.ndarray[double, ndim=2] out = np.empty((m, kmax + 1), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef const double[::1] x = xa
    cdef double twox
    with nogil:
        for i in range(m):
            twox = 2.0 * x[i]
            o[i, 0] = 1.0
            if kmax >= 1:
                o[i, 1] = x[i] if kind == 1 else twox
            for k in range(2, kmax + 1):
                o[i, k] = twox * o[i, k - 1] - o[i, k - 2]
    return out
