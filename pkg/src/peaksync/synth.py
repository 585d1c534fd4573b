"""Deterministic coupled spike-train fixtures for tests and demos.

Channel 1 is the master train (Bernoulli peaks at ``base_rate``).  Inside
the coupled segment each follower receives every master peak with
probability ``coupling`` (its position jittered by rounded Gaussian noise)
plus an independent background at rate ``base_rate * (1 - coupling)``, so
the per-channel rate stays at ``base_rate`` for any coupling.  Outside the
segment followers are plain independent Bernoulli trains.  Collisions
collapse to a single 1 and jittered copies are clipped to the signal.

With ``emit="raw"`` the trains are embedded as amplitude-8 impulses in unit
Gaussian noise, which the default detector recovers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .peaks import PeakTrain
from .record import MultiChannelRecord
from .validation import ValidationError

RAW_IMPULSE_AMPLITUDE = 8.0


@dataclass(frozen=True)
class SynthSpec:
    """Generator settings; ``segment`` is half-open 0-based (None = everywhere)."""

    r: int
    n_samples: int
    base_rate: float
    coupling: float = 0.0
    jitter_std: float = 0.0
    segment: tuple[int, int] | None = None
    seed: int = 0
    emit: str = "trains"
    sample_rate_hz: float = 256.0

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValidationError("r must be >= 1")
        if self.n_samples < 1:
            raise ValidationError("n_samples must be >= 1")
        if not 0.0 < self.base_rate < 0.5:
            raise ValidationError("base_rate must lie in (0, 0.5)")
        if not 0.0 <= self.coupling <= 1.0:
            raise ValidationError("coupling must lie in [0, 1]")
        if self.jitter_std < 0.0:
            raise ValidationError("jitter_std must be non-negative")
        if self.segment is not None:
            lo, hi = self.segment
            if not 0 <= lo < hi <= self.n_samples:
                raise ValidationError(
                    f"segment {self.segment} not within [0, {self.n_samples})"
                )
        if self.emit not in ("trains", "raw"):
            raise ValidationError("emit must be 'trains' or 'raw'")
        if self.sample_rate_hz <= 0:
            raise ValidationError("sample_rate_hz must be positive")


def _labels(r: int) -> tuple[str, ...]:
    return tuple(f"ch{i + 1}" for i in range(r))


def generate_trains(spec: SynthSpec) -> dict[str, PeakTrain]:
    """Generate the labeled train set for ``spec`` (deterministic per seed)."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_samples
    lo, hi = spec.segment if spec.segment is not None else (0, n)
    coupled = np.zeros(n, dtype=bool)
    coupled[lo:hi] = True

    master = rng.random(n) < spec.base_rate
    trains = {_labels(spec.r)[0]: master}
    for i in range(1, spec.r):
        follower = np.zeros(n, dtype=bool)
        # Copied master peaks, each kept with probability `coupling` and
        # jittered; applies only inside the coupled segment.
        master_idx = np.flatnonzero(master & coupled)
        kept = master_idx[rng.random(master_idx.size) < spec.coupling]
        if spec.jitter_std > 0.0:
            shifts = np.rint(rng.normal(0.0, spec.jitter_std, kept.size)).astype(np.int64)
            kept = np.clip(kept + shifts, 0, n - 1)
        follower[kept] = True
        # Independent background: reduced rate inside the segment, full
        # rate outside, so the expected per-channel rate stays base_rate.
        u = rng.random(n)
        background_rate = np.where(
            coupled, spec.base_rate * (1.0 - spec.coupling), spec.base_rate
        )
        follower |= u < background_rate
        trains[_labels(spec.r)[i]] = follower

    return {
        label: PeakTrain(values.astype(np.uint8), label)
        for label, values in trains.items()
    }


def generate_record(spec: SynthSpec) -> MultiChannelRecord:
    """Embed the generated trains as impulses in unit Gaussian noise."""
    trains = generate_trains(spec)
    # Child stream: noise is decoupled from the train draws above.
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 1]))
    samples = rng.standard_normal((spec.r, spec.n_samples))
    for i, label in enumerate(_labels(spec.r)):
        samples[i, trains[label].indicators == 1] = RAW_IMPULSE_AMPLITUDE
    return MultiChannelRecord(_labels(spec.r), samples, spec.sample_rate_hz)


def generate(spec: SynthSpec) -> dict[str, PeakTrain] | MultiChannelRecord:
    """Dispatch on ``spec.emit``: labeled trains or a raw record."""
    if spec.emit == "raw":
        return generate_record(spec)
    return generate_trains(spec)
