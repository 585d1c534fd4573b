"""Binary peak trains from sliding-window amplitude thresholding.

A sample is a peak when it is a strict local maximum (for a plateau of
equal values, only the first sample of the run counts, and the run must be
strictly higher than the samples on both sides) and its amplitude exceeds
``median + multiplier * std`` of the tumbling window containing it.  The
final partial window reuses the threshold of the last full window, and the
standard deviation is the population one.

The measure downstream does not care how trains were produced; externally
supplied 0/1 trains are accepted everywhere a ``PeakTrain`` is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .record import MultiChannelRecord
from .validation import ValidationError, check_positive

POLARITIES = ("positive", "negative", "both")


@dataclass(frozen=True)
class DetectorConfig:
    """Sliding-threshold detector settings.

    ``window_len`` is the tumbling-window length in samples (>= 3),
    ``multiplier`` scales the window standard deviation added to the window
    median, and ``polarity`` selects upward peaks, downward peaks (troughs,
    detected on the negated signal) or the union of both.
    """

    window_len: int
    multiplier: float = 2.0
    polarity: str = "positive"

    def __post_init__(self) -> None:
        if int(self.window_len) != self.window_len or self.window_len < 3:
            raise ValidationError(f"window_len must be an integer >= 3, got {self.window_len}")
        object.__setattr__(self, "window_len", int(self.window_len))
        check_positive(self.multiplier, "multiplier")
        if self.polarity not in POLARITIES:
            raise ValidationError(f"polarity must be one of {POLARITIES}")


@dataclass(frozen=True)
class PeakTrain:
    """0/1 indicator sequence marking the peak samples of one channel."""

    indicators: NDArray[np.uint8] = field(repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.indicators)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("indicators must be a non-empty 1-D sequence")
        as_float = np.asarray(arr, dtype=np.float64)
        if not np.all((as_float == 0.0) | (as_float == 1.0)):
            raise ValidationError("indicators must contain only 0 and 1")
        arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "indicators", arr)

    def __len__(self) -> int:
        return int(self.indicators.size)

    @property
    def peak_indices(self) -> NDArray[np.int64]:
        return np.flatnonzero(self.indicators).astype(np.int64)


def window_thresholds(channel: NDArray[np.float64], window_len: int, multiplier: float) -> NDArray[np.float64]:
    """Per-sample threshold from tumbling windows of ``window_len`` samples.

    Thresholds are median + multiplier * population std per full window; the
    trailing partial window (if any) inherits the last full window's value.
    """
    n = channel.size
    n_full = n // window_len
    blocks = channel[: n_full * window_len].reshape(n_full, window_len)
    per_window = np.median(blocks, axis=1) + multiplier * np.std(blocks, axis=1)
    thresholds = np.repeat(per_window, window_len)
    if n > n_full * window_len:
        tail = np.full(n - n_full * window_len, per_window[-1])
        thresholds = np.concatenate([thresholds, tail])
    return thresholds


def _strict_local_maxima(x: NDArray[np.float64]) -> NDArray[np.bool_]:
    """Mask of strict local maxima, first-of-plateau convention.

    A run of equal values qualifies when a strictly smaller sample precedes
    and follows it; only the run's first index is marked.  Runs touching
    either end of the array never qualify.
    """
    n = x.size
    mask = np.zeros(n, dtype=bool)
    if n < 3:
        return mask
    diff = np.sign(np.diff(x))  # -1, 0, +1 per step
    # next_sign[i]: sign of the first nonzero step at index >= i (0 when all
    # remaining steps are flat).  Built by forward-filling the reversed steps.
    rev = diff[::-1]
    pos = np.where(rev != 0, np.arange(rev.size), 0)
    np.maximum.accumulate(pos, out=pos)
    seen = np.maximum.accumulate((rev != 0).astype(np.int8)).astype(bool)
    next_sign = np.where(seen, rev[pos], 0.0)[::-1]
    # Sample i+1 starts a peak run iff step i rises into it and the first
    # non-flat step after i falls; runs reaching the end never qualify.
    after = np.concatenate([next_sign[1:], [0.0]])
    mask[1:] = (diff > 0) & (after == -1)
    return mask


def detect_peaks(channel: ArrayLike, cfg: DetectorConfig, label: str = "") -> PeakTrain:
    """Detect peaks on one channel and return its 0/1 train.

    The result is invariant under adding a constant to the channel and under
    multiplying it by a positive factor.  ``polarity="negative"`` runs the
    detector on the negated signal; ``"both"`` returns the union of the two
    trains.

    Raises ValidationError when the channel is shorter than the window or
    contains non-finite samples.
    """
    x = np.asarray(channel, dtype=np.float64)
    if x.ndim != 1:
        raise ValidationError("channel must be 1-D")
    if not np.all(np.isfinite(x)):
        raise ValidationError("channel contains non-finite samples")
    if x.size < cfg.window_len:
        raise ValidationError(
            f"channel has {x.size} samples, shorter than window_len={cfg.window_len}"
        )
    if cfg.polarity == "both":
        pos = _detect_one_sided(x, cfg)
        neg = _detect_one_sided(-x, cfg)
        return PeakTrain(np.maximum(pos, neg), label)
    if cfg.polarity == "negative":
        return PeakTrain(_detect_one_sided(-x, cfg), label)
    return PeakTrain(_detect_one_sided(x, cfg), label)


def _detect_one_sided(x: NDArray[np.float64], cfg: DetectorConfig) -> NDArray[np.uint8]:
    thresholds = window_thresholds(x, cfg.window_len, cfg.multiplier)
    candidates = _strict_local_maxima(x)
    return (candidates & (x > thresholds)).astype(np.uint8)


def detect_record(record: MultiChannelRecord, cfg: DetectorConfig) -> dict[str, PeakTrain]:
    """Detect peaks on every channel of a record, keyed by label."""
    return {
        label: detect_peaks(record.samples[i], cfg, label)
        for i, label in enumerate(record.labels)
    }


def trains_from_matrix(matrix: ArrayLike, labels) -> dict[str, PeakTrain]:
    """Wrap an externally supplied 0/1 matrix (channels x time) as trains."""
    arr = np.asarray(matrix)
    labels = list(labels)
    if arr.ndim != 2 or arr.shape[0] != len(labels):
        raise ValidationError("matrix must be 2-D with one row per label")
    return {label: PeakTrain(arr[i], label) for i, label in enumerate(labels)}
