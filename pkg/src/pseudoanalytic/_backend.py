"""Kernel backend selection.

The compiled extension is used when it imports cleanly. Setting
``PSEUDOANALYTIC_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("PSEUDOANALYTIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"


def qmul(p, q):
    return kernels.qmul(p, q)


def cumsimpson(y, h):
    return kernels.cumsimpson(y, h)
