"""Switch between numba-compiled kernels and the plain numpy fallback.

Set ``HAMLAB_NO_JIT=1`` in the environment before importing :mod:`hamlab`
to run every kernel as ordinary Python over numpy arrays.  Both paths run
the same source, so results (cycles, node counts) are identical; only speed
differs.
"""

import os

_FLAG = os.environ.get("HAMLAB_NO_JIT", "").strip().lower()
JIT_ENABLED = _FLAG not in ("1", "true", "yes", "on")

if JIT_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        JIT_ENABLED = False

if JIT_ENABLED:

    def kernel(fn):
        return _njit(cache=True, nogil=True)(fn)

else:

    def kernel(fn):
        return fn


__all__ = ["JIT_ENABLED", "kernel"]
