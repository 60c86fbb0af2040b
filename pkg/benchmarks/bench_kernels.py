"""Compiled vs pure-Python kernels, with LAPACK as a reference.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 64 256 512]
"""

import argparse
import time

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from gueflux import _pykernels
from gueflux.gue import tridiag_entries

try:
    from gueflux import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 512, 1024])
    args = ap.parse_args()

    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':<22}{'n':>6}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'lapack':>12}{'speedup':>10}")
    for n in args.sizes:
        d, e = tridiag_entries(n, np.random.default_rng(n))
        idx = np.array([n // 2 - 1, int(np.sqrt(n)) - 1, n - 1], dtype=np.int64)
        x = np.linspace(-1, 1, n)
        cases = [
            ("tql_eigvals", lambda m: m.tql_eigvals(d, e), lambda: eigvalsh_tridiagonal(d, e, lapack_driver="sterf")),
            ("bisect_eigvals (3)", lambda m: m.bisect_eigvals(d, e, idx), None),
            ("cheb_table (K=16)", lambda m: m.cheb_table(x, 16, 1), None),
        ]
        for label, fn, ref in cases:
            # the pure-Python QL is slow; fewer repeats keep the run short
            times = [best_of(lambda: fn(m), args.repeat if name != "python" or n <= 256 else 1)
                     for name, m in backends]
            ref_t = best_of(ref, args.repeat) if ref else float("nan")
            speed = times[0] / times[-1] if len(times) > 1 else float("nan")
            print(f"{label:<22}{n:>6}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times)
                  + (f"{ref_t * 1e3:>10.3f}ms" if ref else f"{'-':>12}") + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
