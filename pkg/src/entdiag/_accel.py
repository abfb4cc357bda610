"""Backend switch for the hot kernels.

Set ``ENTDIAG_DISABLE_NUMBA=1`` to force the pure-numpy code paths. The flag
is read once at import time.
"""
from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLE_NUMBA = os.environ.get("ENTDIAG_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba  # noqa: F401
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False
    njit = None

USE_NUMBA = HAS_NUMBA and not DISABLE_NUMBA


def jit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity."""
    if not HAS_NUMBA:
        return func
    return njit(cache=True)(func)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
