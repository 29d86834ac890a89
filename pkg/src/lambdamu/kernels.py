"""Kernel selection: the compiled extension when built, otherwise the pure-Python fallback.

Set ``LMU_PURE=1`` to force the fallback.
"""

import os

from . import _closure_py

BACKEND = "python"
transitive_closure = _closure_py.transitive_closure

if os.environ.get("LMU_PURE") != "1":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        transitive_closure = _kernels.transitive_closure

__all__ = ["BACKEND", "transitive_closure"]
