"""Numba acceleration switch.

Set ``FROBGEOM_DISABLE_NUMBA=1`` to run the pure-numpy kernels instead of the
jitted loop kernels. The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("FROBGEOM_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    from numba import njit as _numba_njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if NUMBA_AVAILABLE:
        return _numba_njit(*args, **kwargs)

    def decorator(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return decorator
