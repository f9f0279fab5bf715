"""Kernel backend selection.

Set ``QBELL_BACKEND=numpy`` to force the pure numpy kernels.  The default is
``numba`` when the package imports, falling back to numpy otherwise.
"""
import os

BACKEND = os.environ.get("QBELL_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ImportError(f"QBELL_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and BACKEND == "numba"


def njit(func):
    """``numba.njit(cache=True)`` if numba is importable, else identity."""
    if not HAVE_NUMBA:  # pragma: no cover
        return func
    return numba.njit(cache=True)(func)
