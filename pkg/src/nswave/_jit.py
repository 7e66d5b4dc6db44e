"""Optional numba acceleration.

Set ``NSWAVE_DISABLE_NUMBA=1`` to force the pure-numpy code paths (useful for
debugging and for the benchmark that compares both backends).
"""
import os

DISABLE_NUMBA = os.environ.get("NSWAVE_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")

try:
    if DISABLE_NUMBA:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with the env flag
    HAVE_NUMBA = False
    _njit = None


def njit(fn):
    """Compile ``fn`` with numba when available, otherwise return it unchanged."""
    if HAVE_NUMBA:
        return _njit(cache=True)(fn)
    return fn


def backend_name():
    return "numba" if HAVE_NUMBA else "numpy"
