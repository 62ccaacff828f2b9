"""Numba toggle shared by every compiled kernel in the package.

Compiled kernels are opt-out: set ``DIRGEO_DISABLE_NUMBA=1`` to force the
pure-numpy code paths (useful for debugging and for environments where
numba is unavailable; the import falls back automatically in that case).
``DIRGEO_WORKERS`` caps the numba thread pool.
"""

import os


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


NUMBA_ENABLED = False

if not _env_flag("DIRGEO_DISABLE_NUMBA"):
    try:
        import numba
        from numba import njit, prange

        NUMBA_ENABLED = True
        workers = os.environ.get("DIRGEO_WORKERS", "").strip()
        if workers:
            n = max(1, min(int(workers), numba.config.NUMBA_NUM_THREADS))
            numba.set_num_threads(n)
    except ImportError:
        pass

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        # Mirror the decorator-with-arguments form so call sites need no guard.
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

    prange = range
