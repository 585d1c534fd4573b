"""Peak-synchronization series for pairs and groups of trains.

For each train ``k`` a local field ``f_k(t) = sum_j a_j p_k(t+j)`` scores
peak presence within ``n`` samples of ``t``, and an indicator ``I_k(t)``
(1 when ``p_k(t) = 0``, 1/2 when ``p_k(t) = 1``) halves a train's own
contribution when both sides of a pair peak simultaneously.  The pair
series is

    phi_{1,2}(t) = I_1 f_1 p_2 + I_2 f_2 p_1

and the group series for ``r`` trains divides the single-pass bracket

    (sum_k f_k I_k)(sum_k p_k) - sum_k f_k I_k p_k

by ``C(r, 2)``, which equals the average of all pairwise series.  Values
live in [0, 1]; the first and last ``n`` samples are defined as 0 (the
weighted neighborhood is only complete for interior time points).

Indexing is 0-based throughout: a series of length N has interior (valid)
samples ``n .. N-n-1``, the half-open ``valid_range = (n, N - n)``.

Determinism: sums over the fixed lag window run in fixed lag order, and
sums over trains are computed in ascending value order, so group results
are bit-identical under any permutation of the input trains and invariant
to how the trains were sliced from a longer recording.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from numpy.typing import NDArray

from .peaks import PeakTrain
from .validation import ValidationError, check_index_interval
from .weights import WeightVector


@dataclass(frozen=True)
class SyncSeries:
    """Per-sample synchronization values for a pair or group of trains."""

    values: NDArray[np.float64] = field(repr=False)
    members: tuple[str, ...]
    weights_used: WeightVector
    valid_range: tuple[int, int]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GroupScore:
    """Compound synchronization of one channel group over one interval.

    ``interval`` is half-open 0-based; ``members`` are stored sorted.
    """

    members: tuple[str, ...]
    interval: tuple[int, int]
    phi_bar: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if not 0.0 <= self.phi_bar <= 1.0:
            raise ValidationError(f"phi_bar {self.phi_bar} outside [0, 1]")


def _train_matrix(trains: list[PeakTrain] | tuple[PeakTrain, ...]) -> NDArray[np.float64]:
    lengths = {len(t) for t in trains}
    if len(lengths) != 1:
        raise ValidationError(f"trains have mixed lengths {sorted(lengths)}")
    out = np.empty((len(trains), lengths.pop()), dtype=np.float64)
    for i, train in enumerate(trains):
        out[i] = train.indicators
    return out


def _check_window(n_samples: int, w: WeightVector) -> None:
    if n_samples < 2 * w.n + 1:
        raise ValidationError(
            f"trains of length {n_samples} are shorter than the weight window "
            f"(2n+1 = {2 * w.n + 1})"
        )


def local_fields(p: NDArray[np.float64], w: WeightVector) -> NDArray[np.float64]:
    """Local fields for a (r, N) train matrix: ``f[k, t] = sum_j a_j p[k, t+j]``.

    Lags falling outside the array contribute zero; interior columns carry
    the full 2n+1-term sum.  Accumulation runs in ascending lag order, one
    reused scratch row (fresh large temporaries per lag would dominate the
    runtime at millions of samples).
    """
    r, n_samples = p.shape
    f = np.zeros((r, n_samples), dtype=np.float64)
    scratch = np.empty(n_samples, dtype=np.float64)
    n = w.n
    for j in range(-n, n + 1):
        lo = max(0, -j)
        hi = min(n_samples, n_samples - j)
        if lo >= hi:
            continue
        weight = w.a[n + j]
        for k in range(r):
            np.multiply(p[k, lo + j:hi + j], weight, out=scratch[lo:hi])
            np.add(f[k, lo:hi], scratch[lo:hi], out=f[k, lo:hi])
    return f


def local_field(train: PeakTrain, w: WeightVector, t: int) -> float:
    """Weighted count of the train's peaks within ``n`` samples of ``t``.

    ``t`` must be interior: ``n <= t < len(train) - n``.
    """
    n = w.n
    if not n <= t < len(train) - n:
        raise ValidationError(
            f"t={t} outside the interior range [{n}, {len(train) - n})"
        )
    p = train.indicators
    total = 0.0
    for j in range(-n, n + 1):
        total += w.a[n + j] * float(p[t + j])
    return total


def _zero_edges(values: NDArray[np.float64], n: int) -> None:
    if n > 0:
        values[:n] = 0.0
        values[-n:] = 0.0


def pairwise_sync(p1: PeakTrain, p2: PeakTrain, w: WeightVector) -> SyncSeries:
    """Synchronization series of two equal-length trains.

    phi(t) = I_1 f_1 p_2 + I_2 f_2 p_1 on interior samples, 0 at the edges.
    Equivalently: max(f_1 p_2, f_2 p_1) when at most one train peaks at t,
    and (f_1 p_2 + f_2 p_1) / 2 when both do.
    """
    if len(p1) != len(p2):
        raise ValidationError(f"train lengths differ: {len(p1)} vs {len(p2)}")
    _check_window(len(p1), w)
    p = _train_matrix([p1, p2])
    f = local_fields(p, w)
    ind = 1.0 - 0.5 * p
    values = ind[0] * f[0] * p[1] + ind[1] * f[1] * p[0]
    _zero_edges(values, w.n)
    return SyncSeries(
        values=values,
        members=(p1.label, p2.label),
        weights_used=w,
        valid_range=(w.n, len(p1) - w.n),
    )


def _sort_rows_elementwise(arr: NDArray[np.float64], scratch: NDArray[np.float64]) -> None:
    """Sort each column of a small (r, N) array in place, ascending.

    A min/max exchange network over whole rows: contiguous vector ops
    instead of a strided per-column sort, which matters at large N.
    """
    r = arr.shape[0]
    for sweep in range(r - 1):
        for k in range(r - 1 - sweep):
            np.minimum(arr[k], arr[k + 1], out=scratch)
            np.maximum(arr[k], arr[k + 1], out=arr[k + 1])
            arr[k] = scratch


def multi_sync(trains: list[PeakTrain] | tuple[PeakTrain, ...], w: WeightVector) -> SyncSeries:
    """Group synchronization series of ``r >= 2`` equal-length trains.

    Evaluates the single-pass bracket of the group formula as
    ``sum_k f_k I_k (P - p_k)`` with ``P = sum_k p_k`` (one pass over
    trains, O(r N)), then divides by the pair count C(r, 2).  The addends
    are summed in ascending value order per time point, which makes the
    output bit-identical under any reordering of the trains.
    """
    if len(trains) < 2:
        raise ValidationError(f"need at least 2 trains, got {len(trains)}")
    p = _train_matrix(list(trains))
    _check_window(p.shape[1], w)
    f = local_fields(p, w)
    total_peaks = p.sum(axis=0)  # exact small integers
    scratch = np.empty(p.shape[1], dtype=np.float64)
    for k in range(p.shape[0]):  # f[k] <- f_k * I_k * (P - p_k), in place
        np.multiply(p[k], -0.5, out=scratch)
        scratch += 1.0
        f[k] *= scratch
        np.subtract(total_peaks, p[k], out=scratch)
        f[k] *= scratch
    _sort_rows_elementwise(f, scratch)
    bracket = np.add.reduce(f, axis=0)
    values = bracket / comb(len(trains), 2)
    _zero_edges(values, w.n)
    return SyncSeries(
        values=values,
        members=tuple(t.label for t in trains),
        weights_used=w,
        valid_range=(w.n, p.shape[1] - w.n),
    )


def multi_sync_pairwise(trains: list[PeakTrain] | tuple[PeakTrain, ...], w: WeightVector) -> SyncSeries:
    """Group series as the explicit average of all pairwise series.

    Reference path for the single-pass form (the two agree to within
    accumulated round-off, ~1e-15); it costs C(r, 2) pairwise evaluations
    and exists for validation and benchmarking.
    """
    if len(trains) < 2:
        raise ValidationError(f"need at least 2 trains, got {len(trains)}")
    trains = list(trains)
    total: NDArray[np.float64] | None = None
    for i in range(len(trains) - 1):
        for j in range(i + 1, len(trains)):
            series = pairwise_sync(trains[i], trains[j], w)
            total = series.values.copy() if total is None else total + series.values
    assert total is not None
    values = total / comb(len(trains), 2)
    return SyncSeries(
        values=values,
        members=tuple(t.label for t in trains),
        weights_used=w,
        valid_range=(w.n, len(trains[0]) - w.n),
    )


def compound(series: SyncSeries, t0: int, span: int) -> float:
    """Mean of the series over the half-open window ``[t0, t0 + span)``."""
    if span < 1:
        raise ValidationError(f"span must be >= 1, got {span}")
    start, stop = check_index_interval(t0, t0 + span, len(series), "compound window")
    return float(np.mean(series.values[start:stop]))


def rank_groups(
    trains: dict[str, PeakTrain],
    groups: list[list[str]] | list[tuple[str, ...]],
    w: WeightVector,
    interval: tuple[int, int] | None = None,
) -> list[GroupScore]:
    """Score each label group by its compound measure and sort descending.

    ``interval`` is half-open 0-based and defaults to the full length.
    Ties are broken lexicographically on the sorted member labels, so the
    order is deterministic and independent of listing order.
    """
    scores = []
    for group in groups:
        if len(group) < 2:
            raise ValidationError(f"group {group} has fewer than 2 members")
        for label in group:
            if label not in trains:
                raise ValidationError(f"unknown label {label!r}")
        member_trains = [trains[label] for label in group]
        series = multi_sync(member_trains, w)
        if interval is None:
            t0, stop = 0, len(series)
        else:
            t0, stop = check_index_interval(interval[0], interval[1], len(series))
        phi_bar = compound(series, t0, stop - t0)
        scores.append(GroupScore(members=tuple(group), interval=(t0, stop), phi_bar=phi_bar))
    scores.sort(key=lambda s: (-s.phi_bar, s.members))
    return scores
