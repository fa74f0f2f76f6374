"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the drop-in
fallback.  ``NONTWIST_PURE_PYTHON=1`` forces the fallback (useful for the
benchmark and for debugging).  Both expose the same functions with the same
arithmetic, so the choice affects speed only.
"""
import os

if os.environ.get("NONTWIST_PURE_PYTHON"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"


def kernel_backend():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
