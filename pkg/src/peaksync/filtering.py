"""Zero-phase band-pass and band-stop filtering of multichannel records.

Filters are Butterworth designs realized as cascaded second-order sections
(bilinear transform) and applied forward and backward, so the pass is
zero-phase and peak timing is untouched.  Edge transients are handled by
odd-reflection padding of three filter lengths at each boundary (the
scipy ``sosfiltfilt`` default); tests discard one second per edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .record import MultiChannelRecord
from .validation import ValidationError, check_positive

DEFAULT_BANDPASS_ORDER = 4
DEFAULT_NOTCH_ORDER = 2


@dataclass(frozen=True)
class FilterSpec:
    """Band-pass band, optional stop band, and per-stage biquad counts.

    The stop band is enabled when ``notch_high_hz > 0`` and must then lie
    inside the pass band.  ``order`` is the band-pass Butterworth order
    (= number of biquad sections); ``notch_order`` the band-stop one.
    """

    low_hz: float = 25.0
    high_hz: float = 100.0
    notch_low_hz: float = 49.0
    notch_high_hz: float = 51.0
    order: int = DEFAULT_BANDPASS_ORDER
    notch_order: int = DEFAULT_NOTCH_ORDER

    def __post_init__(self) -> None:
        check_positive(self.low_hz, "low_hz")
        check_positive(self.high_hz, "high_hz")
        if self.low_hz >= self.high_hz:
            raise ValidationError(
                f"band edges out of order: {self.low_hz} >= {self.high_hz}"
            )
        if self.notch_low_hz < 0 or self.notch_high_hz < 0:
            raise ValidationError("notch edges must be non-negative")
        if self.notch_enabled:
            if self.notch_low_hz >= self.notch_high_hz:
                raise ValidationError(
                    f"notch edges out of order: {self.notch_low_hz} >= {self.notch_high_hz}"
                )
            if self.notch_low_hz < self.low_hz or self.notch_high_hz > self.high_hz:
                raise ValidationError("notch band must lie inside the pass band")
        if self.order < 1 or self.notch_order < 1:
            raise ValidationError("filter orders must be >= 1")

    @property
    def notch_enabled(self) -> bool:
        return self.notch_high_hz > 0.0

    def validate_for_rate(self, sample_rate_hz: float) -> None:
        nyquist = sample_rate_hz / 2.0
        if self.high_hz >= nyquist:
            raise ValidationError(
                f"band edge {self.high_hz} Hz at or above Nyquist ({nyquist} Hz)"
            )


def _apply_sos(record: MultiChannelRecord, sos: np.ndarray) -> MultiChannelRecord:
    filtered = sosfiltfilt(sos, record.samples, axis=1)
    return MultiChannelRecord(record.labels, filtered, record.sample_rate_hz)


def bandpass_sos(low_hz: float, high_hz: float, order: int, sample_rate_hz: float) -> np.ndarray:
    """Second-order sections of the Butterworth band-pass design."""
    return butter(order, [low_hz, high_hz], btype="bandpass", fs=sample_rate_hz, output="sos")


def bandstop_sos(low_hz: float, high_hz: float, order: int, sample_rate_hz: float) -> np.ndarray:
    """Second-order sections of the Butterworth band-stop design."""
    return butter(order, [low_hz, high_hz], btype="bandstop", fs=sample_rate_hz, output="sos")


def bandpass(record: MultiChannelRecord, spec: FilterSpec) -> MultiChannelRecord:
    """Zero-phase band-pass each channel; length and channel count preserved."""
    spec.validate_for_rate(record.sample_rate_hz)
    sos = bandpass_sos(spec.low_hz, spec.high_hz, spec.order, record.sample_rate_hz)
    return _apply_sos(record, sos)


def notch(
    record: MultiChannelRecord,
    center_hz: float,
    bandwidth_hz: float,
    order: int = DEFAULT_NOTCH_ORDER,
) -> MultiChannelRecord:
    """Zero-phase band-stop around ``center_hz`` (width ``bandwidth_hz``)."""
    check_positive(center_hz, "center_hz")
    check_positive(bandwidth_hz, "bandwidth_hz")
    high = center_hz + bandwidth_hz / 2.0
    low = center_hz - bandwidth_hz / 2.0
    if low <= 0:
        raise ValidationError("notch band extends to or below 0 Hz")
    if high >= record.sample_rate_hz / 2.0:
        raise ValidationError(
            f"notch edge {high} Hz at or above Nyquist ({record.sample_rate_hz / 2.0} Hz)"
        )
    sos = bandstop_sos(low, high, order, record.sample_rate_hz)
    return _apply_sos(record, sos)


def apply_filter_spec(record: MultiChannelRecord, spec: FilterSpec) -> MultiChannelRecord:
    """Band-pass, then band-stop when the spec enables one."""
    out = bandpass(record, spec)
    if spec.notch_enabled:
        center = (spec.notch_low_hz + spec.notch_high_hz) / 2.0
        width = spec.notch_high_hz - spec.notch_low_hz
        out = notch(out, center, width, spec.notch_order)
    return out
