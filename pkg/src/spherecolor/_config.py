"""Runtime switches and shared tolerances.

``SPHERECOLOR_DISABLE_NUMBA=1`` runs every kernel as plain Python/numpy.
``SPHERECOLOR_THREADS`` caps the numba thread pool.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

_FALSY = {"", "0", "false", "no", "off"}


def numba_disabled() -> bool:
    return os.environ.get("SPHERECOLOR_DISABLE_NUMBA", "").strip().lower() not in _FALSY


def thread_count() -> int | None:
    raw = os.environ.get("SPHERECOLOR_THREADS", "").strip()
    if not raw:
        return None
    n = int(raw)
    if n < 1:
        raise ValueError("SPHERECOLOR_THREADS must be a positive integer")
    return n


@dataclass(frozen=True)
class Tolerances:
    geometry: float = 1e-9
    on_curve: float = 1e-10
    unit: float = 1e-9
    samples_per_tile: int = 1000


TOL = Tolerances()


def set_tolerance(value: float) -> None:
    """Override the geometric assertion tolerance process-wide (CLI ``--tolerance``)."""
    global TOL
    if not value > 0:
        raise ValueError("tolerance must be positive")
    TOL = Tolerances(geometry=value, on_curve=TOL.on_curve, unit=value,
                     samples_per_tile=TOL.samples_per_tile)
