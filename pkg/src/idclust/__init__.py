"""Spectral clustering with outlier-cluster detection and automatic K selection."""

from .affinity import AffinityKind, cosine_affinity, gaussian_affinity, tracklet_median_affinity
from .core import (
    AffinityMatrix,
    ClusterStats,
    IdcError,
    IdcResult,
    LabeledDataset,
    Partition,
    make_partition,
    validate_affinity,
)
from .idc import cluster_stats, estimate, f_score, outlier_labels
from .spectral import LaplacianKind, spectral_cluster, spectral_embed

__version__ = "0.1.0"
