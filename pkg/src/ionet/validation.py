"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    DomainError,
    NonFiniteError,
    OutOfRangeError,
)

# Row sums of a transition matrix may deviate from one by at most this much.
ROW_SUM_TOL = 1e-12


def as_float_array(x, name: str = "array") -> np.ndarray:
    """Return ``x`` as a float64 ndarray, copying only when needed."""
    try:
        arr = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatchError(f"{name} is not numeric: {exc}") from None
    return arr


def as_square_array(x, name: str = "matrix") -> np.ndarray:
    """Return ``x`` as a square 2-d float64 array or raise."""
    arr = as_float_array(x, name)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(
            f"{name} must be square, got shape {arr.shape}"
        )
    if arr.shape[0] == 0:
        raise DimensionMismatchError(f"{name} must have at least one row")
    return arr


def check_finite(arr: np.ndarray, name: str = "matrix") -> np.ndarray:
    if not np.isfinite(arr).all():
        bad = np.argwhere(~np.isfinite(arr))[0]
        pos = ", ".join(str(int(i)) for i in bad)
        raise NonFiniteError(f"{name} has a non-finite entry at ({pos})")
    return arr


def check_flow_matrix(x, name: str = "flow matrix") -> np.ndarray:
    """Validate a dense flow matrix: square, finite, nonnegative.

    Returns a float64 copy that callers may treat as owned.
    """
    arr = np.array(as_square_array(x, name), dtype=np.float64, copy=True)
    check_finite(arr, name)
    if (arr < 0).any():
        i, j = np.argwhere(arr < 0)[0]
        raise DomainError(
            f"{name} has a negative flow at ({int(i)}, {int(j)}): {arr[i, j]!r}"
        )
    return arr


def check_transition_matrix(x, name: str = "transition matrix") -> np.ndarray:
    """Validate a row-stochastic matrix within :data:`ROW_SUM_TOL`."""
    arr = np.array(as_square_array(x, name), dtype=np.float64, copy=True)
    check_finite(arr, name)
    if (arr < 0).any() or (arr > 1).any():
        raise DomainError(f"{name} has entries outside [0, 1]")
    sums = arr.sum(axis=1)
    off = np.abs(sums - 1.0)
    if (off > ROW_SUM_TOL).any():
        i = int(np.argmax(off))
        raise DomainError(
            f"{name} row {i} sums to {sums[i]!r}, expected 1 within {ROW_SUM_TOL}"
        )
    return arr


def check_vector(x, n: int | None = None, name: str = "vector") -> np.ndarray:
    arr = as_float_array(x, name)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be 1-d, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatchError(
            f"{name} has length {arr.shape[0]}, expected {n}"
        )
    check_finite(arr, name)
    return np.array(arr, dtype=np.float64, copy=True)


def check_index(i, n: int, name: str = "sector index") -> int:
    idx = int(i)
    if not 0 <= idx < n:
        raise OutOfRangeError(f"{name} {idx} outside [0, {n})")
    return idx


def check_alpha(alpha) -> float:
    a = float(alpha)
    if not np.isfinite(a) or a < 0:
        raise DomainError(f"alpha must be finite and >= 0, got {alpha!r}")
    return a


def check_unit_interval(arr: np.ndarray, name: str) -> np.ndarray:
    if (arr < 0).any() or (arr > 1).any():
        raise DomainError(f"{name} has entries outside [0, 1]")
    return arr
