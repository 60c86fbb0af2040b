"""Pure-Python twins of the compiled kernels in ``_ckernels.pyx``.

Same algorithms, same stopping rules, same outputs (up to rounding order).
They are slow for n in the thousands and exist so the package works without
a C compiler.
"""

import math

import numpy as np

from gueflux.errors import ConvergenceError

EPS = np.finfo(float).eps


def _gershgorin(d, e):
    n = len(d)
    lo = hi = d[0]
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return lo, hi


def tql_eigvals(d_in, e_in, max_iter=30):
    d = [float(v) for v in d_in]
    n = len(d)
    if n == 0:
        return np.empty(0)
    e = [float(v) for v in e_in] + [0.0]
    lo, hi = _gershgorin(d, e)
    tol = EPS * (hi - lo)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= tol:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ConvergenceError(f"QL failed to converge at index {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.sqrt(f * f + g * g)
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
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def _sturm_count(d, e2, x, pivmin):
    cnt = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        cnt += 1
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            cnt += 1
    return cnt


def sturm_count(d_in, e_in, x):
    d = [float(v) for v in d_in]
    if not d:
        return 0
    e = [float(v) for v in e_in]
    lo, hi = _gershgorin(d, e)
    pivmin = 1e-300 + EPS * EPS * max(1.0, hi - lo)
    return _sturm_count(d, [v * v for v in e], float(x), pivmin)


def bisect_eigvals(d_in, e_in, indices):
    d = [float(v) for v in d_in]
    n = len(d)
    if n == 0:
        raise ValueError("empty matrix")
    e = [float(v) for v in e_in]
    e2 = [v * v for v in e]
    glo, ghi = _gershgorin(d, e)
    width = ghi - glo
    pivmin = 1e-300 + EPS * EPS * max(1.0, width)
    glo -= 2.0 * EPS * max(1.0, width)
    ghi += 2.0 * EPS * max(1.0, width)
    out = np.empty(len(indices))
    for t, k in enumerate(indices):
        k = int(k)
        if k < 0 or k >= n:
            raise IndexError(f"eigenvalue index {k} out of range for n={n}")
        lo, hi = glo, ghi
        while hi - lo > 2.0 * EPS * (abs(lo) + abs(hi)) + pivmin:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _sturm_count(d, e2, mid, pivmin) > k:
                hi = mid
            else:
                lo = mid
        out[t] = 0.5 * (lo + hi)
    return out


def cheb_table(x_in, kmax, kind=1):
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    x = np.ravel(np.asarray(x_in, dtype=float))
    out = np.empty((x.size, kmax + 1))
    out[:, 0] = 1.0
    if kmax >= 1:
        out[:, 1] = x if kind == 1 else 2.0 * x
    twox = 2.0 * x
    for k in range(2, kmax + 1):
        out[:, k] = twox * out[:, k - 1] - out[:, k - 2]
    return out
