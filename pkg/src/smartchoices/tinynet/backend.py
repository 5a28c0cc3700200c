"""Kernel backend selection.

The compiled extension is preferred; the NumPy fallback is used when it is
unavailable. SMARTCHOICES_BACKEND={cython,python} forces a backend.
"""

import os

_forced = os.environ.get("SMARTCHOICES_BACKEND", "").lower()

if _forced == "python":
    from . import _kernels_py as kernels

    BACKEND = "python"
elif _forced == "cython":
    from . import _kernels as kernels  # noqa: F401  (ImportError is intentional)

    BACKEND = "cython"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"
