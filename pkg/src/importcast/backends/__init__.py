"""LSTM kernel backend selection.

The hot kernels (stacked-LSTM sequence forward and backpropagation through
time) exist twice: a Cython extension compiled at install time and a NumPy
fallback with identical semantics. The compiled backend is preferred when
importable; set IMPORTCAST_BACKEND=python|cython|auto (read once at import)
to override. Both produce interchangeable caches, so they can be
cross-checked against each other and against the finite-difference oracle.
"""

from __future__ import annotations

import os

from importcast.backends import _lstm_py
from importcast.errors import ConfigError

_BACKENDS = {"python": _lstm_py}

try:
    from importcast.backends import _lstm_cy

    _BACKENDS["cython"] = _lstm_cy
except ImportError:
    _lstm_cy = None


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ConfigError(
            f"backend {name!r} not available; built backends: "
            f"{', '.join(available_backends())}"
        )


def _select():
    choice = os.environ.get("IMPORTCAST_BACKEND", "auto").strip().lower()
    if choice in ("", "auto"):
        return _BACKENDS.get("cython", _lstm_py)
    return get_backend(choice)


_active = _select()


def active_backend() -> str:
    """Name of the backend picked at import time."""
    return _active.NAME


def get_active():
    return _active
