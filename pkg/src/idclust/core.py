"""Shared domain types: affinity matrices, partitions, datasets, results.

Everything here is validation and storage. Arrays held by these types are
marked read-only so instances can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SYMMETRY_TOL = 1e-9


class IdcError(ValueError):
    """Base class for all validation and numerical errors in this package."""


class NonSquareError(IdcError):
    pass


class AsymmetricError(IdcError):
    pass


class NegativeWeightError(IdcError):
    pass


class NonFiniteError(IdcError):
    pass


class InvalidPartitionError(IdcError):
    pass


class EmptyClusterError(IdcError):
    def __init__(self, cluster: int):
        super().__init__(f"cluster {cluster} is empty")
        self.cluster = cluster


class InvalidDatasetError(IdcError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AffinityMatrix:
    """Symmetric, nonnegative, zero-diagonal weight matrix of a graph.

    Build instances through :func:`validate_affinity`; the constructor does
    not check anything.
    """

    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)


def validate_affinity(raw) -> AffinityMatrix:
    """Check a raw square array and return it as an :class:`AffinityMatrix`.

    The diagonal is forced to zero. Asymmetry up to ``SYMMETRY_TOL`` is
    repaired by averaging with the transpose; anything larger is an error.
    """
    w = np.array(raw, dtype=float, copy=True)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
        raise NonSquareError(f"affinity must be a nonempty square matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise NonFiniteError("affinity contains NaN or infinite entries")
    asym = np.max(np.abs(w - w.T))
    if asym > SYMMETRY_TOL:
        raise AsymmetricError(f"max |W_ij - W_ji| = {asym:.3g} exceeds {SYMMETRY_TOL:g}")
    if asym > 0:
        w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    if np.any(w < 0):
        i, j = np.argwhere(w < 0)[0]
        raise NegativeWeightError(f"negative weight {w[i, j]:.3g} at ({i}, {j})")
    return AffinityMatrix(_frozen(w))


@dataclass(frozen=True)
class Partition:
    labels: np.ndarray
    k: int

    @property
    def size(self) -> int:
        return self.labels.shape[0]

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels == i)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def make_partition(labels, k: int | None = None, require_nonempty: bool = False) -> Partition:
    """Validate ``labels`` as an assignment to ``k`` clusters.

    ``k`` defaults to ``max(labels) + 1``. With ``require_nonempty`` every
    cluster index in ``[0, k)`` must be used.
    """
    lab = np.array(labels, copy=True)
    if lab.ndim != 1 or lab.size == 0:
        raise InvalidPartitionError("labels must be a nonempty 1-d array")
    if not np.issubdtype(lab.dtype, np.integer):
        if not np.all(np.equal(np.mod(lab, 1), 0)):
            raise InvalidPartitionError("labels must be integers")
    lab = lab.astype(np.int64)
    if k is None:
        k = int(lab.max()) + 1
    if k < 1:
        raise InvalidPartitionError(f"k must be >= 1, got {k}")
    if lab.min() < 0 or lab.max() >= k:
        raise InvalidPartitionError(f"labels must lie in [0, {k})")
    if require_nonempty:
        counts = np.bincount(lab, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            raise EmptyClusterError(int(empty[0]))
    return Partition(_frozen(lab), int(k))


def relabel(labels) -> Partition:
    """Map arbitrary hashable labels to a dense partition ``0..k-1`` by first appearance."""
    _, first, inv = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return make_partition(order[inv.ravel()])


@dataclass(frozen=True)
class LabeledDataset:
    """Feature rows with ground truth; label 0 marks outliers, 1..N_in inliers."""

    features: np.ndarray
    labels: np.ndarray
    n_inlier_clusters: int

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def is_outlier(self) -> np.ndarray:
        return self.labels == 0


def make_dataset(features, labels, n_inlier_clusters: int | None = None) -> LabeledDataset:
    x = np.array(features, dtype=float, copy=True)
    y = np.array(labels, copy=True)
    if x.ndim != 2 or x.shape[0] == 0 or x.shape[1] == 0:
        raise InvalidDatasetError(f"features must be a nonempty 2-d array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidDatasetError("features contain non-finite values")
    if y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise InvalidDatasetError("labels must have one entry per feature row")
    if y.size and not np.all(np.equal(np.mod(y, 1), 0)):
        raise InvalidDatasetError("labels must be integers")
    y = y.astype(np.int64)
    if n_inlier_clusters is None:
        n_inlier_clusters = int(y.max()) if y.size else 0
    if y.min() < 0 or y.max() > n_inlier_clusters:
        raise InvalidDatasetError(f"labels must lie in [0, {n_inlier_clusters}]")
    return LabeledDataset(_frozen(x), _frozen(y), int(n_inlier_clusters))


@dataclass(frozen=True)
class ClusterStats:
    """Per-cluster density statistics for one partition.

    ``within[i]`` is the mean within-cluster affinity, ``between[i, j]`` the
    mean affinity across clusters ``i`` and ``j``. ``delta_raw`` offsets
    ``within`` by the average of the cluster's row of ``between``;
    ``delta_norm`` divides by the largest ``delta_raw``. When no cluster has
    a positive offset the normalization is undefined: ``degenerate`` is set
    and ``delta_norm`` is all NaN.
    """

    within: np.ndarray
    between: np.ndarray
    delta_raw: np.ndarray
    delta_norm: np.ndarray
    outlier_index: int
    degenerate: bool = False

    @property
    def k(self) -> int:
        return self.within.shape[0]


@dataclass(frozen=True)
class IdcResult:
    chosen_k: int
    partition: Partition
    stats: ClusterStats
    trace: list[tuple[int, float]] = field(default_factory=list)
    k_min: int = 0
    k_max: int = 0

    @property
    def outlier_index(self) -> int:
        return self.stats.outlier_index

    @property
    def n_inlier_estimate(self) -> int:
        return self.chosen_k - 1
