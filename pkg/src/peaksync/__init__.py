"""Peak-based synchronization analysis for multichannel time series.

Functional core (records, filters, peak trains, lag weights, the
synchronization measure, surrogate significance, eigenvalue baseline,
synthetic fixtures) plus scikit-learn style transformers and a CLI.
"""

from .eigcorr import EigenSeries, corr_matrix, eigen_track, jacobi_eigenvalues
from .estimators import (
    BandpassNotchFilter,
    PeakDetector,
    PeakSynchrony,
    SlidingEigenvalues,
)
from .filtering import FilterSpec, apply_filter_spec, bandpass, notch
from .peaks import DetectorConfig, PeakTrain, detect_peaks, detect_record, trains_from_matrix
from .pipeline import SyncPipeline
from .record import MultiChannelRecord, read_record, read_series, write_record, write_series
from .surrogate import (
    SurrogateConfig,
    nearest_rank_percentile,
    shuffle_surrogate,
    significance_threshold,
    surrogate_pool,
)
from .sync import (
    GroupScore,
    SyncSeries,
    compound,
    local_field,
    multi_sync,
    multi_sync_pairwise,
    pairwise_sync,
    rank_groups,
)
from .synth import SynthSpec, generate, generate_record, generate_trains
from .validation import ParseError, ValidationError
from .weights import (
    CustomDensity,
    GaussianDensity,
    UniformDensity,
    WeightVector,
    build_weights,
    density_from_name,
    half_support,
    strip_half_width,
)

__version__ = "0.1.0"

__all__ = [
    "BandpassNotchFilter",
    "CustomDensity",
    "DetectorConfig",
    "EigenSeries",
    "FilterSpec",
    "GaussianDensity",
    "GroupScore",
    "MultiChannelRecord",
    "ParseError",
    "PeakDetector",
    "PeakSynchrony",
    "PeakTrain",
    "SlidingEigenvalues",
    "SurrogateConfig",
    "SyncPipeline",
    "SyncSeries",
    "SynthSpec",
    "UniformDensity",
    "ValidationError",
    "WeightVector",
    "apply_filter_spec",
    "bandpass",
    "build_weights",
    "compound",
    "corr_matrix",
    "density_from_name",
    "detect_peaks",
    "detect_record",
    "eigen_track",
    "generate",
    "generate_record",
    "generate_trains",
    "half_support",
    "jacobi_eigenvalues",
    "local_field",
    "multi_sync",
    "multi_sync_pairwise",
    "nearest_rank_percentile",
    "notch",
    "pairwise_sync",
    "rank_groups",
    "read_record",
    "read_series",
    "shuffle_surrogate",
    "significance_threshold",
    "strip_half_width",
    "surrogate_pool",
    "trains_from_matrix",
    "write_record",
    "write_series",
]
