"""Backend selection: compiled Cython kernels with a pure NumPy fallback.

The compiled module is preferred when importable. ``RESIDENCY_BACKEND``
(``compiled`` or ``pure``) forces a choice at import time, and
:func:`use_backend` overrides it temporarily, which the benchmark and the
cross-checking tests rely on.
"""

from __future__ import annotations

import contextlib
import os

from . import _pure

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built; fall back to numpy
    _compiled = None

_FORCED = None


def _env_choice():
    choice = os.environ.get("RESIDENCY_BACKEND", "").strip().lower()
    if choice in ("compiled", "pure"):
        return choice
    return None


def compiled_available() -> bool:
    return _compiled is not None


def backend_name() -> str:
    if _FORCED is not None:
        return _FORCED
    env = _env_choice()
    if env is not None:
        return env
    return "compiled" if _compiled is not None else "pure"


def active():
    """The module providing daylevel_solve / boundary_solve / warped_solve."""
    name = backend_name()
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError(
                "compiled backend requested but residency._kernels is not built")
        return _compiled
    return _pure


@contextlib.contextmanager
def use_backend(name: str):
    """Force a backend within a ``with`` block (\"compiled\" or \"pure\")."""
    global _FORCED
    if name not in ("compiled", "pure"):
        raise ValueError(f"unknown backend {name!r}")
    previous = _FORCED
    _FORCED = name
    try:
        active()  # fail fast if unavailable
        yield
    finally:
        _FORCED = previous
