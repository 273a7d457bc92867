"""Selects between numba-compiled kernels and the pure numpy/Python path.

Set CROSSCERT_NO_NUMBA=1 to force the fallback path.
"""
import os

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

_off = os.environ.get("CROSSCERT_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
USE_NUMBA = HAVE_NUMBA and not _off


def njit(*args, **kwargs):
    """numba.njit when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)
