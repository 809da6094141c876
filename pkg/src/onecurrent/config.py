"""Global numeric comparison tolerance.

Every comparison in the library goes through a single tolerance value tau
(default 1e-9). It can be overridden per process via the ONECURRENT_TOL
environment variable or at runtime with set_tolerance(); individual
operations also accept an explicit ``tol=`` argument.
"""

from __future__ import annotations

import os

DEFAULT_TOL = 1e-9

_tol = float(os.environ.get("ONECURRENT_TOL", DEFAULT_TOL))


def get_tolerance() -> float:
    return _tol


def set_tolerance(value: float) -> None:
    global _tol
    if value <= 0:
        raise ValueError("tolerance must be positive")
    _tol = float(value)


def resolve(tol: float | None) -> float:
    """Tolerance actually used by an operation: explicit arg or the global."""
    return _tol if tol is None else float(tol)
