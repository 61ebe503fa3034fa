"""Numba switch.

Kernels are compiled with ``numba.njit`` unless the environment sets
``JITLIQ_NUMBA=0`` (or numba is not importable), in which case ``njit`` is a
no-op and the grid evaluators dispatch to their vectorised numpy twins.
"""

import os

_flag = os.environ.get("JITLIQ_NUMBA", "1").strip().lower()

NUMBA_ENABLED = _flag not in ("0", "false", "no", "off")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper


__all__ = ["NUMBA_ENABLED", "njit"]
