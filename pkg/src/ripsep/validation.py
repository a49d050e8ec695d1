"""Input validation helpers.

Every public entry point funnels its array-like inputs through one of
these checkers so error messages are uniform and the numeric kernels can
assume clean float64 data.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def check_point_cloud(points) -> np.ndarray:
    """Validate a point cloud and return it as a float64 array of shape (n, d).

    Requirements: at least 2 points, every point with the same dimension
    d >= 1, all coordinates finite, and no two identical points (duplicates
    would produce zero edge lengths, which the downstream entropy bounds
    cannot tolerate).
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValidationError(
            f"point cloud must be a 2-D array of shape (n, d), got shape {arr.shape}"
        )
    if arr.shape[0] < 2:
        raise ValidationError(f"point cloud needs at least 2 points, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("point cloud contains non-finite coordinates")
    dupes = _duplicate_rows(arr)
    if dupes:
        pairs = ", ".join(f"({i}, {j})" for i, j in dupes)
        raise ValidationError(f"duplicate points at index pairs {pairs}")
    return np.ascontiguousarray(arr)


def _duplicate_rows(arr: np.ndarray) -> list[tuple[int, int]]:
    """Return (first, duplicate) index pairs for identical rows."""
    order = np.lexsort(arr.T[::-1])
    pairs = []
    for a, b in zip(order[:-1], order[1:]):
        if np.array_equal(arr[a], arr[b]):
            lo, hi = (int(a), int(b)) if a < b else (int(b), int(a))
            pairs.append((lo, hi))
    return pairs


def check_lengths(lengths) -> np.ndarray:
    """Validate a list of bar lengths: non-empty, finite, strictly positive."""
    arr = np.asarray(lengths, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("bar lengths must form a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("bar lengths must be finite")
    if np.any(arr <= 0.0):
        raise ValidationError("bar lengths must be strictly positive")
    return arr


def check_diagram(points) -> np.ndarray:
    """Validate a persistence diagram as a float64 array of shape (k, 2).

    Finite coordinates with birth < death for every point; an empty
    diagram is allowed and comes back with shape (0, 2).
    """
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(
            f"diagram must be an array of (birth, death) pairs, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("diagram contains non-finite coordinates")
    if np.any(arr[:, 0] >= arr[:, 1]):
        raise ValidationError("diagram points must satisfy birth < death")
    return arr
