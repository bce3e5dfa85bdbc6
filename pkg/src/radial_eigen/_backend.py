"""Kernel backend selection.

The hot inner loops in ``_kernels`` are written as plain scalar/array code
that compiles under numba's nopython mode. Selection happens once at import
time via the environment variable ``RADIAL_EIGEN_BACKEND``:

    auto   (default) use numba when importable, else pure numpy
    numba  require numba, fail loudly if missing
    numpy  force the uncompiled fallback (used by benchmarks/bench_backends.py)
"""

import os

_choice = os.environ.get("RADIAL_EIGEN_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        "RADIAL_EIGEN_BACKEND must be one of auto|numba|numpy, got %r" % _choice
    )

USING_NUMBA = False
_njit = None
if _choice in ("auto", "numba"):
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise
        USING_NUMBA = False

BACKEND = "numba" if USING_NUMBA else "numpy"


def jit(func):
    """Compile ``func`` with numba when the numba backend is active."""
    if USING_NUMBA:
        return _njit(cache=True)(func)
    return func
