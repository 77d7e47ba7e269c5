"""Backend selection: compiled Cython kernels if importable, numpy otherwise.

Set TORUSSKEIN_PURE=1 to force the fallback.
"""
import os

from . import _kernels_py as py

BACKEND = "python"
if not os.environ.get("TORUSSKEIN_PURE"):
    try:
        from . import _kernels as _ext

        BACKEND = "cython"
    except ImportError:
        _ext = None
else:
    _ext = None

_impl = _ext if _ext is not None else py

gauss_counts = _impl.gauss_counts
cyclic_mul = _impl.cyclic_mul
cyclo_rem = _impl.cyclo_rem
