"""Numba switch for the hot kernels.

Set ``FUZZYFIND_DISABLE_JIT=1`` to run every kernel through its pure-numpy
counterpart instead. The numba variants stay importable either way; with the
flag set (or numba missing) ``njit`` becomes a no-op decorator.
"""
from __future__ import annotations

import functools
import os

_FLAG = os.environ.get("FUZZYFIND_DISABLE_JIT", "").strip().lower()

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when JIT is enabled, identity decorator otherwise."""
    if USE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*a, **kw):
            return fn(*a, **kw)

        return inner

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return wrap(args[0])
    return wrap


__all__ = ["NUMBA_AVAILABLE", "USE_NUMBA", "njit"]
