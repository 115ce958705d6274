"""Optional numba acceleration.

Set ``CAMCOVER_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.
"""

import os

_DISABLED = os.environ.get("CAMCOVER_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba as nb

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    nb = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _DISABLED


def njit(func=None, **kwargs):
    """``numba.njit`` with project defaults; identity when numba is missing."""
    opts = dict(cache=True, nogil=True)
    opts.update(kwargs)

    def wrap(f):
        if not HAS_NUMBA:
            return f
        return nb.njit(**opts)(f)

    if func is None:
        return wrap
    return wrap(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


__all__ = ["HAS_NUMBA", "USE_NUMBA", "njit", "backend_name"]
