"""Numba switch for the numeric kernels.

Kernels are written once in a numba-compatible subset of numpy and
compiled with ``njit`` unless ``WPTFAIR_DISABLE_NUMBA`` is set to a truthy
value (or numba cannot be imported), in which case the very same functions
run as plain Python/numpy.  The flag is read once, at import time.
"""

import os

_FLAG = os.environ.get("WPTFAIR_DISABLE_NUMBA", "").strip().lower()

if _FLAG in ("1", "true", "yes", "on"):
    NUMBA_ENABLED = False
else:
    try:
        import numba
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False
    else:
        NUMBA_ENABLED = True


def jit(func):
    """Compile ``func`` with numba when enabled, otherwise return it as is."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(func)
    return func
