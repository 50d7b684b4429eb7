"""Kernel backend selection.

Hot loops are written once in numba-compatible Python and compiled with
``@njit`` when numba is importable.  Setting ``NTHNEIGHBOUR_DISABLE_JIT=1``
(or any of ``true``/``yes``/``on``) forces the pure-numpy fallback kernels,
which is useful for debugging and for the backend benchmark.
"""

from __future__ import annotations

import os

_FLAG = "NTHNEIGHBOUR_DISABLE_JIT"


def _env_disables_jit() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba as _numba
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and not _env_disables_jit()
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, otherwise a no-op decorator.

    Compilation is lazy, so importing the package stays cheap even when the
    numpy backend is the active one.
    """
    if HAVE_NUMBA:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def jitable(fn):
    """Mark a scalar helper as callable from both Python and njit kernels."""
    if HAVE_NUMBA:
        from numba.extending import register_jitable

        return register_jitable(fn)
    return fn
