"""Integration kernels with a compiled backend and a numpy fallback.

The compiled module is used when it was built and ``REPARAM_PURE_PYTHON`` is
unset (or ``0``). ``get_backend`` returns either implementation explicitly,
which the benchmarks and the backend-parity tests rely on.
"""

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

__all__ = ["BACKEND", "kernels", "get_backend", "compiled_available"]


def compiled_available() -> bool:
    return _ckernels is not None


def get_backend(name: str) -> ModuleType:
    """Return the ``"compiled"`` or ``"python"`` kernel module."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


_force_py = os.environ.get("REPARAM_PURE_PYTHON", "0") not in ("", "0")
BACKEND = "compiled" if (_ckernels is not None and not _force_py) else "python"
kernels = get_backend(BACKEND)
