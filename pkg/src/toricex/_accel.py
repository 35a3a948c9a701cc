"""Backend selection for the compiled kernels.

Set ``TORICEX_DISABLE_NUMBA=1`` to force the pure-numpy implementations.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("TORICEX_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

HAVE_NUMBA = numba is not None
NUMBA_ENABLED = HAVE_NUMBA and not _DISABLED


def njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True)(fn)


def default_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
