"""Input validation helpers shared by the estimators, the functional core
and the file readers."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray


class ValidationError(ValueError):
    """An input violates a documented invariant (bad shape, range, label...)."""


class ParseError(ValueError):
    """A file could not be parsed (ragged row, non-numeric cell...)."""


def check_samples_matrix(X: ArrayLike, name: str = "X") -> NDArray[np.float64]:
    """Coerce to a 2-D float64 array of finite samples.

    Accepts (n_samples,) or (n_samples, n_channels) input and always returns
    a 2-D array. Raises ValidationError on empty or non-finite input.
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 1-D or 2-D, got {arr.ndim}-D")
    if arr.size == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def check_binary_matrix(X: ArrayLike, name: str = "X") -> NDArray[np.uint8]:
    """Coerce to a 2-D uint8 array whose entries are all 0 or 1."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 1-D or 2-D, got {arr.ndim}-D")
    if arr.size == 0:
        raise ValidationError(f"{name} is empty")
    values = np.asarray(arr, dtype=np.float64)
    if not np.all((values == 0.0) | (values == 1.0)):
        raise ValidationError(f"{name} must contain only 0/1 values")
    return arr.astype(np.uint8)


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValidationError(f"{name} must be a positive finite number, got {value}")
    return value


def check_in_open_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or not 0.0 < value < 1.0:
        raise ValidationError(f"{name} must lie strictly between 0 and 1, got {value}")
    return value


def check_index_interval(start: int, stop: int, n: int, name: str = "interval") -> tuple[int, int]:
    """Validate a half-open index interval [start, stop) against length n."""
    start = int(start)
    stop = int(stop)
    if not 0 <= start < stop <= n:
        raise ValidationError(
            f"{name} [{start}, {stop}) is not a valid half-open range within [0, {n})"
        )
    return start, stop
