"""Numba switch.

Hot loops are decorated with :func:`njit`.  Setting ``WMATCH_DISABLE_NUMBA=1``
(or running without numba installed) turns the decorator into a no-op so the
same functions run as plain Python over numpy arrays.
"""
import os

ENABLE_NUMBA = os.environ.get("WMATCH_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None
    ENABLE_NUMBA = False


def njit(func):
    if ENABLE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def py_func(func):
    """Return the undecorated Python version of a kernel."""
    return getattr(func, "py_func", func)
