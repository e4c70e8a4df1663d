"""Numba switch.

Set ``SYMREMOVAL_DISABLE_NUMBA=1`` to force the pure-numpy kernels (useful
for debugging, or on platforms without numba). When numba is missing the
numpy path is used automatically.
"""
import os

DISABLE_ENV = "SYMREMOVAL_DISABLE_NUMBA"

_disabled = os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    _njit = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
