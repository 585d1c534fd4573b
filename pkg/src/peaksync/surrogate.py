"""Chance-level significance of synchronization via shuffled surrogates.

Each surrogate permutes every channel's raw samples independently (same
amplitudes, destroyed timing), re-runs the full pipeline, and contributes
one value to the pool: its compound synchronization (the mean over the
surrogate's interior range).  The significance threshold is the
nearest-rank percentile of that pool, one scalar per record and group.

With sparse peak trains almost all per-time-point values are zero, so a
percentile over raw time points degenerates to 0; pooling the per-surrogate
compound values instead yields a threshold that separates chance-level
intervals from genuinely synchronized ones.

Randomness comes from numpy's PCG64 generator (algorithm id recorded as
``numpy-pcg64``); surrogate ``i`` uses seed ``seed + 1 + i`` so runs are
reproducible and order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .pipeline import SyncPipeline
from .record import MultiChannelRecord
from .validation import ValidationError

RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class SurrogateConfig:
    """Surrogate count, percentile level in (0, 100), and base seed."""

    count: int = 100
    percentile: float = 95.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValidationError("count must be >= 2")
        if not 0.0 < self.percentile < 100.0:
            raise ValidationError("percentile must lie strictly between 0 and 100")


def shuffle_surrogate(record: MultiChannelRecord, seed: int) -> MultiChannelRecord:
    """Permute each channel's samples independently (seeded, deterministic).

    Labels and sample rate are preserved; each channel keeps its exact
    multiset of amplitudes.
    """
    rng = np.random.default_rng(seed)
    shuffled = np.empty_like(record.samples)
    for i in range(record.n_channels):
        shuffled[i] = record.samples[i][rng.permutation(record.n_samples)]
    return MultiChannelRecord(record.labels, shuffled, record.sample_rate_hz)


def nearest_rank_percentile(values: NDArray[np.float64], percentile: float) -> float:
    """Nearest-rank percentile: the ceil(q/100 * M)-th smallest of M values."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValidationError("cannot take a percentile of an empty pool")
    if not 0.0 < percentile < 100.0:
        raise ValidationError("percentile must lie strictly between 0 and 100")
    ordered = np.sort(values, kind="stable")
    rank = int(np.ceil(percentile / 100.0 * ordered.size))
    rank = min(max(rank, 1), ordered.size)
    return float(ordered[rank - 1])


def surrogate_pool(
    record: MultiChannelRecord,
    group: list[str] | tuple[str, ...],
    pipeline: SyncPipeline,
    cfg: SurrogateConfig,
) -> NDArray[np.float64]:
    """Compound synchronization of every surrogate: ``cfg.count`` values.

    Surrogate ``i`` shuffles with seed ``cfg.seed + 1 + i`` and contributes
    the mean of its synchronization series over the interior (valid) range,
    so the pool is deterministic and ordered by surrogate index.
    """
    pool = np.empty(cfg.count, dtype=np.float64)
    for i in range(cfg.count):
        shuffled = shuffle_surrogate(record, cfg.seed + 1 + i)
        series = pipeline.series(shuffled, group)
        lo, hi = series.valid_range
        pool[i] = float(np.mean(series.values[lo:hi]))
    return pool


def significance_threshold(
    record: MultiChannelRecord,
    group: list[str] | tuple[str, ...],
    pipeline: SyncPipeline,
    cfg: SurrogateConfig,
) -> float:
    """Nearest-rank percentile of the pooled surrogate compound values."""
    pool = surrogate_pool(record, group, pipeline, cfg)
    return nearest_rank_percentile(pool, cfg.percentile)
