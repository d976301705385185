"""Kernel backend selection.

The compiled extension is preferred when importable; set
``PCOMPACT_BACKEND=python`` to force the pure-numpy fallback (the
benchmark uses this to compare both).
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("PCOMPACT_BACKEND", "").lower() not in ("python", "py"):
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

batch_eval = _impl.batch_eval
abs_pow_sum = _impl.abs_pow_sum


def get_backends():
    """Return {name: module} for every importable backend."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels_cy

        out["cython"] = _kernels_cy
    except ImportError:
        pass
    return out
