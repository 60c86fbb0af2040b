"""Backend selection for the hot kernels.

The compiled Cython module is used when it imports; otherwise the pure-Python
twins take over. Setting ``GUEFLUX_PURE_PYTHON=1`` forces the fallback.
"""

import os

from gueflux import _pykernels

BACKEND = "python"

if os.environ.get("GUEFLUX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from gueflux import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

tql_eigvals = _impl.tql_eigvals
bisect_eigvals = _impl.bisect_eigvals
sturm_count = _impl.sturm_count
cheb_table = _impl.cheb_table

__all__ = ["BACKEND", "tql_eigvals", "bisect_eigvals", "sturm_count", "cheb_table"]
