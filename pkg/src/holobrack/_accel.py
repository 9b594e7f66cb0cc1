"""Numba switch shared by the numeric kernels.

Set ``HOLOBRACK_DISABLE_NUMBA=1`` to force the pure-numpy code paths (useful
for debugging and for the kernel benchmark). The flag is read once at import.
"""
import os

_FLAG = os.environ.get("HOLOBRACK_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    """``numba.njit(cache=True)`` when acceleration is on, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend():
    return "numba" if USE_NUMBA else "numpy"
