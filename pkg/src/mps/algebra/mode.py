"""Execution mode: ``local`` (localisation at 0) or ``global`` (polynomial ring).

The global mode is only sound for weighted-homogeneous input, where the
localisation at the origin is faithful.  ``MPS_MODE`` sets the default.
"""
from __future__ import annotations

import contextlib
import os

_VALID = ("local", "global")
_mode = os.environ.get("MPS_MODE", "local")
if _mode not in _VALID:
    _mode = "local"


def get_mode():
    return _mode


def set_mode(mode):
    global _mode
    if mode not in _VALID:
        raise ValueError(f"mode must be one of {_VALID}")
    _mode = mode


@contextlib.contextmanager
def using_mode(mode):
    old = get_mode()
    set_mode(mode)
    try:
        yield
    finally:
        set_mode(old)
