"""Batch kernels with compiled/pure-Python selection at import.

Set ``LIEBALL_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("LIEBALL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

dual_hahn_batch = _impl.dual_hahn_batch
hyp2f1_series_batch = _impl.hyp2f1_series_batch

__all__ = ["BACKEND", "dual_hahn_batch", "hyp2f1_series_batch"]
