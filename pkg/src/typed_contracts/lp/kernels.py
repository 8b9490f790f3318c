"""Select the tableau kernels: compiled extension if importable, else pure Python.

Set ``TYPED_CONTRACTS_PURE_PYTHON=1`` to force the fallback at import time, or
call :func:`set_backend` at runtime (used by the kernel benchmark and tests).
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

pivot = entering_bland = leaving_bland = None
BACKEND = None


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def set_backend(name):
    global pivot, entering_bland, leaving_bland, BACKEND
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        module = _compiled
    elif name == "python":
        module = _kernels_py
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    pivot = module.pivot
    entering_bland = module.entering_bland
    leaving_bland = module.leaving_bland
    BACKEND = name


if _compiled is not None and not os.environ.get("TYPED_CONTRACTS_PURE_PYTHON"):
    set_backend("compiled")
else:
    set_backend("python")
