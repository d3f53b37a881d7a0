"""Selection between the compiled and pure-Python downstream kernels.

The compiled module is optional: when it failed to build (or the
``TREEGAMES_BACKEND=python`` environment variable is set) everything runs
on the pure-Python implementation.  Both expose the same three functions
(``leaf_bits``, ``internal_bits``, ``root_bits``) and produce bit-identical
tables.
"""

from __future__ import annotations

import os

from . import _approx_py

try:
    from . import _approx_cy
except ImportError:
    _approx_cy = None


def available_backends() -> list[str]:
    out = ["python"]
    if _approx_cy is not None:
        out.insert(0, "cython")
    return out


def default_backend() -> str:
    env = os.environ.get("TREEGAMES_BACKEND")
    if env:
        if env not in ("python", "cython"):
            raise ValueError(f"TREEGAMES_BACKEND must be python or cython, got {env!r}")
        if env == "cython" and _approx_cy is None:
            raise ImportError("TREEGAMES_BACKEND=cython but the compiled kernel is missing")
        return env
    return "cython" if _approx_cy is not None else "python"


def resolve_backend(name: str | None):
    """Return ``(kernel module, backend name)``."""
    if name is None:
        name = default_backend()
    if name == "python":
        return _approx_py, "python"
    if name == "cython":
        if _approx_cy is None:
            raise ImportError(
                "the compiled kernel is not available; reinstall with Cython "
                "or pass backend='python'"
            )
        return _approx_cy, "cython"
    raise ValueError(f"unknown backend {name!r}")
