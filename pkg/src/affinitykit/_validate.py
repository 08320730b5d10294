"""Shared argument validation helpers."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonFiniteInput


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a non-empty finite 2-D float array."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionMismatch(
            f"{name} must be a non-empty 2-D array, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or infinite entries")
    return arr


def as_vector(value, name: str = "vector") -> np.ndarray:
    """Coerce to a non-empty finite 1-D float array."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch(
            f"{name} must be a non-empty 1-D array, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or infinite entries")
    return arr
