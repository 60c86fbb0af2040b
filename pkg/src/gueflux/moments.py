"""Exact finite-N expectations for the scaled GUE.

For H with weight exp(-Tr H^2) and lambda the eigenvalues of H / sqrt(2N),

    E sum_j lambda_j^(2m) = N b_m 4^-m Cat_m,

where b_0 = b_1 = 1 and b_{m+1} = b_m + m(m+1) / (4 N^2) b_{m-1}
(the Harer-Zagier recursion written for this normalization; brute-force
Wick enumeration confirms the 1/(4N^2) factor, see the tests).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from gueflux.chebyshev import t_eval


def catalan(m):
    return comb(2 * m, m) // (m + 1)


@dataclass(frozen=True, eq=False)
class MomentTable:
    n: int
    b: tuple
    power_trace: tuple  # E sum lambda^(2m) for m = 0..jmax

    def rows(self):
        return [(m, float(self.b[m]), float(self.power_trace[m])) for m in range(len(self.b))]


def harer_zagier(jmax, n, exact=False, increment=None):
    """b_0..b_jmax. ``exact`` gives Fractions.

    ``increment`` overrides the N-dependent factor c in b_{m+1} = b_m +
    m(m+1) c b_{m-1}; the default is 1 / (4 n^2).
    """
    if jmax < 0:
        raise ValueError("jmax must be nonnegative")
    if n < 1:
        raise ValueError("n must be positive")
    c = Fraction(1, 4 * n * n) if increment is None else Fraction(increment)
    b = [Fraction(1), Fraction(1)]
    for m in range(1, jmax):
        b.append(b[m] + m * (m + 1) * c * b[m - 1])
    b = b[: jmax + 1]
    pt = [n * b[m] * Fraction(catalan(m), 4**m) for m in range(jmax + 1)]
    if not exact:
        b = [float(v) for v in b]
        pt = [float(v) for v in pt]
    return MomentTable(n, tuple(b), tuple(pt))


def expected_power_trace(j, n, exact=False):
    """E sum lambda^j; zero for odd j."""
    if j % 2:
        return Fraction(0) if exact else 0.0
    val = harer_zagier(j // 2, n, exact=True).power_trace[j // 2]
    return val if exact else float(val)


@lru_cache(maxsize=None)
def t_coefficients(m):
    """Integer monomial coefficients of T_m (index = power)."""
    prev, cur = [1], [0, 1]
    if m == 0:
        return tuple(prev)
    for _ in range(m - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return tuple(cur)


def _cheb_trace(k, moment):
    coeffs = t_coefficients(k + 1)
    total = Fraction(0)
    for p in range(0, len(coeffs), 2):
        if coeffs[p]:
            total += coeffs[p] * moment(p // 2)
    return total / (k + 1)


def expected_cheb_trace(k, n, exact=False):
    """E sum_j T_{k+1}(lambda_j) / (k+1) at finite n."""
    if (k + 1) % 2:
        return Fraction(0) if exact else 0.0
    tab = harer_zagier((k + 1) // 2, n, exact=True)
    val = _cheb_trace(k, lambda m: tab.power_trace[m])
    return val if exact else float(val)


def semicircle_cheb_integral(k, exact=False):
    """Integral of T_{k+1}(x) / (k+1) against sigma (the b = 1 case, per eigenvalue)."""
    val = _cheb_trace(k, lambda m: Fraction(catalan(m), 4**m))
    return val if exact else float(val)


def linear_statistic_mean(m, n):
    """E sum_j T_m(lambda_j) (m >= 1)."""
    return m * expected_cheb_trace(m - 1, n)


def cheb_power_sums(lam, m):
    """sum_j T_m(lambda_j) for each spectrum row (or a single spectrum)."""
    return np.sum(t_eval(m, np.asarray(lam, dtype=float)), axis=-1)
