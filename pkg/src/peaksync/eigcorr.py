"""Sliding-window correlation-matrix eigenvalue tracks.

The comparison baseline: per window, the zero-lag Pearson correlation
matrix of the selected channels and its eigenvalues sorted descending.
A channel that is constant within a window correlates 0 with everything
(diagonal stays 1).  Eigenvalues come from a cyclic Jacobi sweep, which is
exact to round-off for the tiny matrices involved (r <= ~10) and keeps the
trace, so the eigenvalue sum equals the channel count whenever no window
is degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .record import MultiChannelRecord
from .validation import ValidationError

_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 50


@dataclass(frozen=True)
class EigenSeries:
    """Descending eigenvalues per window, with window geometry."""

    window_centers: NDArray[np.int64] = field(repr=False)
    eigenvalues: NDArray[np.float64] = field(repr=False)
    window_len_m: int
    hop: int

    def __post_init__(self) -> None:
        centers = np.asarray(self.window_centers, dtype=np.int64)
        values = np.asarray(self.eigenvalues, dtype=np.float64)
        if values.ndim != 2 or centers.ndim != 1 or values.shape[0] != centers.size:
            raise ValidationError("eigenvalues must be (n_windows, r) with matching centers")
        centers.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "window_centers", centers)
        object.__setattr__(self, "eigenvalues", values)


def corr_matrix(window: NDArray[np.float64]) -> NDArray[np.float64]:
    """Zero-lag Pearson correlation matrix of an (r, m) window, m >= 2.

    Constant rows get off-diagonal 0 and diagonal 1.  Entries are clipped
    to [-1, 1] to absorb round-off.
    """
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 2:
        raise ValidationError("window must be 2-D (channels x time)")
    r, m = window.shape
    if m < 2:
        raise ValidationError(f"window length {m} < 2")
    centered = window - window.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.sum(centered * centered, axis=1))
    constant = np.ptp(window, axis=1) == 0.0
    safe = np.where(constant, 1.0, norms)
    scaled = centered / safe[:, np.newaxis]
    corr = scaled @ scaled.T
    corr = np.clip(corr, -1.0, 1.0)
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    np.fill_diagonal(corr, 1.0)
    return corr


def jacobi_eigenvalues(matrix: NDArray[np.float64]) -> NDArray[np.float64]:
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below 1e-12.
    Returns the eigenvalues sorted descending.
    """
    a = np.array(matrix, dtype=np.float64)
    r = a.shape[0]
    if a.shape != (r, r):
        raise ValidationError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ValidationError("matrix must be symmetric")
    for _ in range(_JACOBI_MAX_SWEEPS):
        off_diag = a - np.diag(np.diag(a))
        if np.sqrt(np.sum(off_diag * off_diag)) <= _JACOBI_TOL:
            break
        for p in range(r - 1):
            for q in range(p + 1, r):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)  # tan -> 1/(2 theta) for huge theta
                elif theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rotation = np.eye(r)
                rotation[p, p] = c
                rotation[q, q] = c
                rotation[p, q] = s
                rotation[q, p] = -s
                a = rotation.T @ a @ rotation
    return np.sort(np.diag(a))[::-1].copy()


def eigen_track(
    record: MultiChannelRecord,
    group: list[str] | tuple[str, ...],
    m: int,
    hop: int,
) -> EigenSeries:
    """Eigenvalue track over sliding windows of ``m`` samples, step ``hop``.

    Windows start at 0, hop, 2*hop, ... while they fit; the recorded center
    is ``start + m // 2``.
    """
    if len(group) < 2:
        raise ValidationError("group must have at least 2 channels")
    if m < 2:
        raise ValidationError("window length m must be >= 2")
    if hop < 1:
        raise ValidationError("hop must be >= 1")
    sub = record.select(list(group))
    n = sub.n_samples
    if m > n:
        raise ValidationError(f"window length {m} exceeds record length {n}")
    starts = range(0, n - m + 1, hop)
    centers = np.array([s + m // 2 for s in starts], dtype=np.int64)
    values = np.empty((len(centers), len(group)), dtype=np.float64)
    for row, s in enumerate(starts):
        values[row] = jacobi_eigenvalues(corr_matrix(sub.samples[:, s:s + m]))
    return EigenSeries(window_centers=centers, eigenvalues=values, window_len_m=m, hop=hop)
