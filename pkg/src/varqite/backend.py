"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
used otherwise. Set ``VARQITE_KERNELS=python`` (or ``cython``) to force one,
or call :func:`set_kernels` at runtime (used by the benchmark and the
cross-backend tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

kernels = _kernels_py


def _load(name: str):
    if name in ("python", "py"):
        return _kernels_py
    if name in ("cython", "cy", "compiled"):
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r} (use 'python' or 'cython')")


def available_backends() -> tuple[str, ...]:
    names = ["python"]
    try:
        _load("cython")
    except ImportError:
        pass
    else:
        names.append("cython")
    return tuple(names)


def active_backend() -> str:
    return kernels.NAME


def set_kernels(name: str) -> str:
    """Switch the active backend; returns the previous backend name."""
    global kernels
    previous = kernels.NAME
    kernels = _load(name)
    return previous


_requested = os.environ.get("VARQITE_KERNELS", "").strip().lower()
if _requested:
    kernels = _load(_requested)
else:
    try:
        kernels = _load("cython")
    except ImportError:
        kernels = _kernels_py
