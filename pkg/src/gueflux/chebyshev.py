"""Chebyshev polynomials, Fourier-Chebyshev coefficients and the log kernel."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from gueflux import kernels, quadrature
from gueflux.errors import SingularInputError


@dataclass(frozen=True, eq=False)
class ChebCoeffSeq:
    """Coefficients (s_0, ..., s_K) of a series sum_k s_k U_k(x) sqrt(1 - x^2)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def truncation(self):
        return self.coeffs.size - 1

    def __add__(self, other):
        k = min(self.coeffs.size, other.coeffs.size)
        return ChebCoeffSeq(self.coeffs[:k] + other.coeffs[:k])

    def __mul__(self, scale):
        return ChebCoeffSeq(self.coeffs * float(scale))

    __rmul__ = __mul__


def u_eval(k, x):
    """U_k(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for _ in range(k):
        prev, cur = cur, 2.0 * x * cur - prev
    return float(cur) if cur.ndim == 0 else cur


def t_eval(n, x):
    """T_n(x) by the three-term recurrence (valid for any real x)."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return float(1.0) if x.ndim == 0 else np.ones_like(x)
    prev, cur = np.ones_like(x), x.copy()
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return float(cur) if cur.ndim == 0 else cur


def t_derivatives(n, x, order):
    """[T_n(x), T_n'(x), ..., T_n^(order)(x)] via differentiated recurrences.

    Differentiating T_{m+1} = 2x T_m - T_{m-1} k times gives
    T_{m+1}^(k) = 2x T_m^(k) + 2k T_m^(k-1) - T_{m-1}^(k).
    Works elementwise on arrays and exactly on ints/Fractions.
    """
    one = x * 0 + 1
    zero = x * 0
    prev = [one] + [zero] * order  # T_0 and its derivatives
    if n == 0:
        return prev
    cur = [x, one] + [zero] * (order - 1) if order >= 1 else [x]
    for _ in range(n - 1):
        nxt = [2 * x * cur[0] - prev[0]]
        for k in range(1, order + 1):
            nxt.append(2 * x * cur[k] + 2 * k * cur[k - 1] - prev[k])
        prev, cur = cur, nxt
    return cur


def t_deriv_at_one(n, k, exact=False):
    """T_n^(k)(1) = prod_{j<k} (n^2 - j^2) / (2j + 1); 1 for k = 0, 0 for k > n."""
    if k == 0:
        return Fraction(1) if exact else 1.0
    val = Fraction(1)
    for j in range(k):
        val *= Fraction(n * n - j * j, 2 * j + 1)
    return val if exact else float(val)


def _theta_breaks(breakpoints):
    if breakpoints is None:
        return None
    b = np.asarray(breakpoints, dtype=float)
    return np.arccos(np.clip(b, -1.0, 1.0))


def cos_coeff(f, k, tol=1e-10, breakpoints=None):
    """a_k = (2/pi) int_0^pi f(cos t) cos(k t) dt."""
    g = lambda t: f(np.cos(t)) * np.cos(k * t)
    return 2.0 / np.pi * quadrature.integrate(g, 0.0, np.pi, tol=tol, breakpoints=_theta_breaks(breakpoints))


def sine_coeff(f, k, tol=1e-10, breakpoints=None):
    """s_k(f) = (2/pi) int_{-1}^{1} f(x) U_k(x) dx, integrated in t = arccos x.

    In t the integrand becomes f(cos t) sin((k+1) t), which is smooth for
    smooth f. ``breakpoints`` (x-coordinates) split the range for
    piecewise-smooth f.
    """
    g = lambda t: f(np.cos(t)) * np.sin((k + 1) * t)
    return 2.0 / np.pi * quadrature.integrate(g, 0.0, np.pi, tol=tol, breakpoints=_theta_breaks(breakpoints))


def kernel_closed(x, y):
    """Closed form of the log-correlated kernel (the sum in ``kernel_series``).

    With x = cos t, y = cos p the series is sum_k sin(kt) sin(kp) / k
    = (1/2) sum_k (cos k(t-p) - cos k(t+p)) / k, and sum_k cos(kd) / k =
    -log|2 sin(d/2)|. Hence

        -(1/2) log(|x - y| / (1 - xy + sqrt(1-x^2) sqrt(1-y^2))),

    which is 0 when x or y is +-1 and behaves like -(1/2) log|x - y| near
    the diagonal.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x == y):
        raise SingularInputError("kernel is singular at x == y")
    if np.any(np.abs(x) > 1) or np.any(np.abs(y) > 1):
        raise ValueError("x and y must lie in [-1, 1]")
    sx = np.sqrt(1.0 - x * x)
    sy = np.sqrt(1.0 - y * y)
    out = -0.5 * np.log(np.abs(x - y) / (1.0 - x * y + sx * sy))
    out = np.where((np.abs(x) == 1) | (np.abs(y) == 1), 0.0, out)
    return float(out) if out.ndim == 0 else out


def kernel_series(x, y, K):
    """Partial sum over k = 0..K of U_k(x) U_k(y) sqrt(1-x^2) sqrt(1-y^2) / (k+1)."""
    tab = kernels.cheb_table(np.array([x, y], dtype=float), int(K), kind=2)
    # pair the rows symmetrically so the result is exactly symmetric in (x, y)
    terms = tab[0] * tab[1] / np.arange(1, K + 2)
    return float(np.sum(terms) * (math.sqrt(1.0 - x * x) * math.sqrt(1.0 - y * y)))


def kernel_series_tail_bound(x, y, K):
    """Bound on |kernel_closed - kernel_series(K)| for x != y inside (-1, 1).

    The series equals sum_k (cos k d1 - cos k d2) / (2k) with d1 = t - p,
    d2 = t + p (x = cos t, y = cos p); each cosine tail after index K+1 is
    at most 2 / ((K+1) |2 sin(d/2)|) by Abel summation.
    """
    t, p = math.acos(x), math.acos(y)
    bound = 0.0
    for d in (t - p, t + p):
        s = abs(2.0 * math.sin(0.5 * d))
        if s == 0.0:
            return math.inf
        bound += 0.5 * 2.0 / ((K + 1) * s)
    return bound


def kernel_series_terms_for(x, y, tol):
    """Smallest K whose tail bound is below ``tol``."""
    k = max(1, int(math.ceil(kernel_series_tail_bound(x, y, 0) / tol)) - 1)
    while kernel_series_tail_bound(x, y, k) > tol:
        k += 1
    return k
