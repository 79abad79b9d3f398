"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when
``WEIBULLTAIL_PURE_PYTHON`` is set to a non-empty value other than ``0``,
the pure-Python twin is used.
"""

import os

from . import _kernels_py

_force_python = os.environ.get("WEIBULLTAIL_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
tail_curves = _compiled.tail_curves if _compiled is not None else _kernels_py.tail_curves


def available_backends():
    """Map backend name to its ``tail_curves`` callable, compiled one included if built."""
    out = {"python": _kernels_py.tail_curves}
    try:
        from . import _kernels
    except ImportError:
        return out
    out["cython"] = _kernels.tail_curves
    return out
