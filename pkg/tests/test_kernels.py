import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import eigvalsh_tridiagonal

from gueflux import _pykernels, kernels
from gueflux.errors import ConvergenceError

BACKENDS = [_pykernels]
try:
    from gueflux import _ckernels
    BACKENDS.append(_ckernels)
except ImportError:  # extension not built
    pass


def random_tridiag(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n), rng.standard_normal(max(n - 1, 0))


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__)
@pytest.mark.parametrize("n", [1, 2, 3, 10, 57, 200])
def test_tql_matches_lapack(mod, n):
    d, e = random_tridiag(n, n)
    ref = eigvalsh_tridiagonal(d, e)
    got = mod.tql_eigvals(d, e)
    np.testing.assert_allclose(got, ref, atol=1e-12 * max(1, np.abs(ref).max()))
    assert np.all(np.diff(got) >= 0)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__)
def test_tql_degenerate_inputs(mod):
    np.testing.assert_array_equal(mod.tql_eigvals(np.array([3.0, 1.0, 2.0]), np.zeros(2)), [1.0, 2.0, 3.0])
    got = mod.tql_eigvals(np.zeros(4), np.ones(3))
    np.testing.assert_allclose(got, eigvalsh_tridiagonal(np.zeros(4), np.ones(3)), atol=1e-14)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__)
def test_tql_max_iter(mod):
    d, e = random_tridiag(30, 5)
    with pytest.raises(ConvergenceError):
        mod.tql_eigvals(d, e, max_iter=0)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__)
def test_bisection_matches_lapack(mod):
    d, e = random_tridiag(120, 9)
    ref = eigvalsh_tridiagonal(d, e)
    idx = np.array([0, 5, 59, 60, 119], dtype=np.int64)
    np.testing.assert_allclose(mod.bisect_eigvals(d, e, idx), ref[idx], atol=1e-12)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__)
def test_sturm_count(mod):
    d, e = random_tridiag(50, 11)
    ref = eigvalsh_tridiagonal(d, e)
    for x in np.linspace(ref[0] - 1, ref[-1] + 1, 37):
        assert mod.sturm_count(d, e, x) == np.searchsorted(ref, x)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__)
def test_cheb_table(mod):
    x = np.linspace(-1, 1, 21)
    t = mod.cheb_table(x, 6, kind=1)
    u = mod.cheb_table(x, 6, kind=2)
    th = np.arccos(x)
    k = np.arange(7)
    np.testing.assert_allclose(t, np.cos(np.outer(th, k)), atol=1e-13)
    inner = np.abs(x) < 1
    np.testing.assert_allclose(u[inner], np.sin(np.outer(th[inner], k + 1)) / np.sin(th[inner])[:, None], atol=1e-12)


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_backend_parity(n, seed):
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend unavailable")
    d, e = random_tridiag(n, seed)
    py, cy = BACKENDS
    np.testing.assert_allclose(cy.tql_eigvals(d, e), py.tql_eigvals(d, e), atol=1e-13 * (1 + np.abs(d).max() + 2))
    idx = np.arange(n, dtype=np.int64)
    np.testing.assert_array_equal(cy.bisect_eigvals(d, e, idx), py.bisect_eigvals(d, e, idx))
    np.testing.assert_array_equal(cy.cheb_table(d, 5, 2), py.cheb_table(d, 5, 2))


def test_read_only_inputs():
    d, e = random_tridiag(8, 1)
    d.setflags(write=False)
    e.setflags(write=False)
    kernels.tql_eigvals(d, e)
    kernels.cheb_table(d, 3)


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    import os
    import subprocess
    import sys
    env = {**os.environ, "GUEFLUX_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", "from gueflux import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == "python"
