"""Select the compiled kernels when built, else the pure-Python twins.

Set ``QUIVERFORGE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

kernels = _kernels_py
if os.environ.get("QUIVERFORGE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # noqa: F811
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
