"""Optional numba acceleration.

Set ``TAQR_DISABLE_NUMBA=1`` to force the pure-numpy code paths even when
numba is importable.
"""

import os

_disabled = os.environ.get("TAQR_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # bare @njit or @njit(...) both return the function untouched
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorate(func):
            return func

        return decorate


BACKEND = "numba" if HAVE_NUMBA else "numpy"
