"""Gauss-Legendre quadrature with node doubling."""

from functools import lru_cache

import numpy as np

from gueflux.errors import QuadratureError

MAX_NODES = 2**14


@lru_cache(maxsize=None)
def _leggauss(m):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def fixed(f, a, b, m):
    """m-point Gauss-Legendre estimate of the integral of f over [a, b]."""
    x, w = _leggauss(m)
    half = 0.5 * (b - a)
    return half * float(np.dot(w, f(half * x + 0.5 * (a + b))))


def integrate(f, a, b, tol=1e-10, start=16, max_nodes=MAX_NODES, breakpoints=None):
    """Integral of a vectorized ``f`` over [a, b].

    The node count doubles until two successive estimates agree to ``tol``.
    With ``breakpoints`` the interval is split there first and each piece is
    integrated separately (use this for piecewise-smooth integrands).
    """
    if breakpoints is not None:
        if a > b:
            return -integrate(f, b, a, tol, start, max_nodes, breakpoints)
        pts = np.asarray(breakpoints, dtype=float)
        edges = np.concatenate(([a], np.unique(pts[(pts > a) & (pts < b)]), [b]))
        return sum(integrate(f, lo, hi, tol, start, max_nodes)
                   for lo, hi in zip(edges[:-1], edges[1:]))
    m = start
    prev = fixed(f, a, b, m)
    while m < max_nodes:
        m *= 2
        cur = fixed(f, a, b, m)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureError(f"no agreement to {tol:g} with {max_nodes} nodes on [{a}, {b}]")
