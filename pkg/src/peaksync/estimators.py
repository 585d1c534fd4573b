"""Scikit-learn compatible transformers wrapping the functional core.

All estimators take ``X`` with samples as rows and channels as columns,
i.e. shape (n_samples, n_channels), so they compose with sklearn pipelines:

    >>> from sklearn.pipeline import make_pipeline
    >>> pipe = make_pipeline(
    ...     BandpassNotchFilter(sample_rate_hz=256.0),
    ...     PeakDetector(window_len=256),
    ...     PeakSynchrony(a0=0.5, tau=1e-3),
    ... )
    >>> phi = pipe.fit_transform(raw)          # doctest: +SKIP

The transformers are stateless apart from parameter-derived attributes set
in ``fit`` (notably the weight vector of :class:`PeakSynchrony`).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .eigcorr import corr_matrix, jacobi_eigenvalues
from .filtering import FilterSpec, apply_filter_spec
from .peaks import DetectorConfig, detect_peaks
from .record import MultiChannelRecord
from .sync import multi_sync
from .validation import check_binary_matrix, check_samples_matrix
from .weights import WeightVector, build_weights, density_from_name


def _as_record(X, sample_rate_hz: float) -> MultiChannelRecord:
    arr = check_samples_matrix(X)
    labels = tuple(f"ch{i + 1}" for i in range(arr.shape[1]))
    return MultiChannelRecord(labels, arr.T, sample_rate_hz)


class BandpassNotchFilter(BaseEstimator, TransformerMixin):
    """Zero-phase Butterworth band-pass plus optional band-stop.

    Set ``notch_high_hz=0`` to disable the stop band.
    """

    def __init__(
        self,
        sample_rate_hz: float = 256.0,
        low_hz: float = 25.0,
        high_hz: float = 100.0,
        notch_low_hz: float = 49.0,
        notch_high_hz: float = 51.0,
        order: int = 4,
        notch_order: int = 2,
    ):
        self.sample_rate_hz = sample_rate_hz
        self.low_hz = low_hz
        self.high_hz = high_hz
        self.notch_low_hz = notch_low_hz
        self.notch_high_hz = notch_high_hz
        self.order = order
        self.notch_order = notch_order

    def fit(self, X=None, y=None):
        spec = FilterSpec(
            low_hz=self.low_hz,
            high_hz=self.high_hz,
            notch_low_hz=self.notch_low_hz,
            notch_high_hz=self.notch_high_hz,
            order=self.order,
            notch_order=self.notch_order,
        )
        spec.validate_for_rate(self.sample_rate_hz)
        self.spec_ = spec
        return self

    def transform(self, X):
        if not hasattr(self, "spec_"):
            self.fit(X)
        record = _as_record(X, self.sample_rate_hz)
        return apply_filter_spec(record, self.spec_).samples.T


class PeakDetector(BaseEstimator, TransformerMixin):
    """Sliding median + multiplier * std peak detection per column."""

    def __init__(self, window_len: int = 256, multiplier: float = 2.0, polarity: str = "positive"):
        self.window_len = window_len
        self.multiplier = multiplier
        self.polarity = polarity

    def fit(self, X=None, y=None):
        self.config_ = DetectorConfig(
            window_len=self.window_len,
            multiplier=self.multiplier,
            polarity=self.polarity,
        )
        return self

    def transform(self, X):
        if not hasattr(self, "config_"):
            self.fit(X)
        arr = check_samples_matrix(X)
        out = np.empty(arr.shape, dtype=np.uint8)
        for col in range(arr.shape[1]):
            out[:, col] = detect_peaks(arr[:, col], self.config_).indicators
        return out


class PeakSynchrony(BaseEstimator, TransformerMixin):
    """Group synchronization series from 0/1 peak-train columns.

    ``fit`` derives the weight vector from ``(a0, tau, density, scale)``;
    ``transform`` maps an (n_samples, n_channels) 0/1 matrix to the
    (n_samples,) synchronization series of all channels taken together.
    """

    def __init__(self, a0: float = 0.5, tau: float = 1e-3, density: str = "gaussian", scale: float = 1.0):
        self.a0 = a0
        self.tau = tau
        self.density = density
        self.scale = scale

    def fit(self, X=None, y=None):
        self.weights_: WeightVector = build_weights(
            self.a0, self.tau, density_from_name(self.density, self.scale)
        )
        self.n_ = self.weights_.n
        return self

    def transform(self, X):
        if not hasattr(self, "weights_"):
            raise NotFittedError("PeakSynchrony must be fitted before transform")
        from .peaks import PeakTrain

        arr = check_binary_matrix(X)
        trains = [PeakTrain(arr[:, i], f"ch{i + 1}") for i in range(arr.shape[1])]
        return multi_sync(trains, self.weights_).values


class SlidingEigenvalues(BaseEstimator, TransformerMixin):
    """Descending correlation-matrix eigenvalues per sliding window.

    transform maps (n_samples, n_channels) to (n_windows, n_channels);
    ``window_centers_`` holds the center index of each window afterwards.
    """

    def __init__(self, window_len: int = 1024, hop: int = 256):
        self.window_len = window_len
        self.hop = hop

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        arr = check_samples_matrix(X)
        n = arr.shape[0]
        if self.window_len > n:
            raise ValueError(f"window_len {self.window_len} exceeds n_samples {n}")
        starts = range(0, n - self.window_len + 1, self.hop)
        values = np.empty((len(starts), arr.shape[1]))
        centers = np.empty(len(starts), dtype=np.int64)
        for row, s in enumerate(starts):
            window = arr[s:s + self.window_len].T
            values[row] = jacobi_eigenvalues(corr_matrix(window))
            centers[row] = s + self.window_len // 2
        self.window_centers_ = centers
        return values
