"""Select the elimination backend at import time.

Prefers the compiled extension, falls back to the pure-Python twin.
``TROPHODGE_PURE_PYTHON=1`` forces the fallback (used by the benchmark).
"""

import os

if os.environ.get("TROPHODGE_PURE_PYTHON"):
    from trophodge import _kernels_py as kernels
else:
    try:
        from trophodge import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from trophodge import _kernels_py as kernels

BACKEND = kernels.BACKEND
echelonize = kernels.echelonize
int_rank = kernels.rank
