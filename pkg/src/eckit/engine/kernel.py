"""Kernel selection: the compiled extension when importable, else pure Python."""

from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

BACKENDS = {"python": _kernel_py}
if _kernel_c is not None:
    BACKENDS["cython"] = _kernel_c

_choice = os.environ.get("ECKIT_KERNEL", "cython" if _kernel_c is not None else "python")
if _choice not in BACKENDS:
    _choice = "python"


def active():
    return BACKENDS[_choice]


def name() -> str:
    return _choice


def use(backend: str) -> None:
    global _choice
    if backend not in BACKENDS:
        raise ValueError(f"kernel backend {backend!r} unavailable; have {sorted(BACKENDS)}")
    _choice = backend
