"""End-to-end analysis pipeline: optional filtering, detection, group sync.

Bundles the tunables that turn a raw record into a synchronization series
so that surrogate significance runs, the CLI and callers share one recipe.
"""

from __future__ import annotations

from dataclasses import dataclass

from .filtering import FilterSpec, apply_filter_spec
from .peaks import DetectorConfig, detect_peaks
from .record import MultiChannelRecord
from .sync import SyncSeries, multi_sync
from .validation import ValidationError
from .weights import WeightVector


@dataclass(frozen=True)
class SyncPipeline:
    """Filter (optional) -> detect -> group synchronization series."""

    detector: DetectorConfig
    weights: WeightVector
    filter_spec: FilterSpec | None = None

    def series(self, record: MultiChannelRecord, group: list[str] | tuple[str, ...]) -> SyncSeries:
        """Synchronization series of ``group``'s channels in ``record``."""
        if len(group) < 2:
            raise ValidationError(f"group {group} has fewer than 2 members")
        sub = record.select(list(group))
        if self.filter_spec is not None:
            sub = apply_filter_spec(sub, self.filter_spec)
        trains = [
            detect_peaks(sub.samples[i], self.detector, label)
            for i, label in enumerate(sub.labels)
        ]
        return multi_sync(trains, self.weights)
