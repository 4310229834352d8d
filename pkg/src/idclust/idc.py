"""Isolated dense clustering: outlier-cluster statistics and choosing K.

For a partition, every cluster gets a within-cluster mean affinity and a
mean affinity to each other cluster. The sparsest cluster is taken as the
outlier cluster. The score of a partition contrasts the least isolated
inlier cluster with the outlier cluster; sweeping K and keeping the best
score picks the number of clusters, one of which holds the outliers.
"""

from __future__ import annotations

import logging

import numpy as np

from .core import (
    AffinityMatrix,
    ClusterStats,
    EmptyClusterError,
    IdcError,
    IdcResult,
    Partition,
)
from .numerics import EigenDecomposition
from .spectral import DEFAULT_KIND, LaplacianKind, laplacian_eigen, spectral_cluster

log = logging.getLogger(__name__)


class SameClusterError(IdcError):
    pass


class KTooSmallError(IdcError):
    pass


class DegenerateStatsError(IdcError):
    pass


class AllDegenerateError(IdcError):
    pass


class InvalidRangeError(IdcError):
    pass


def _members(p: Partition, i: int) -> np.ndarray:
    if not 0 <= i < p.k:
        raise IdcError(f"cluster index {i} outside [0, {p.k})")
    idx = p.members(i)
    if idx.size == 0:
        raise EmptyClusterError(i)
    return idx


def within_mu(w: AffinityMatrix, p: Partition, i: int) -> float:
    """Mean weight over the ordered pairs of distinct members of cluster ``i``.

    A singleton has no edges; its density is defined as 0, which makes it a
    candidate outlier cluster.
    """
    idx = _members(p, i)
    n = idx.size
    if n == 1:
        return 0.0
    n_edges = n * (n - 1) / 2
    return float(w.weights[np.ix_(idx, idx)].sum() / (2.0 * n_edges))


def between_mu(w: AffinityMatrix, p: Partition, i: int, j: int) -> float:
    if i == j:
        raise SameClusterError(f"between_mu needs two distinct clusters, got {i} twice")
    a, b = _members(p, i), _members(p, j)
    return float(w.weights[np.ix_(a, b)].sum() / (a.size * b.size))


def cluster_stats(w: AffinityMatrix, p: Partition) -> ClusterStats:
    if p.k < 2:
        raise KTooSmallError(f"need at least 2 clusters, got {p.k}")
    if p.size != w.size:
        raise IdcError(f"partition covers {p.size} vertices, affinity has {w.size}")
    sizes = p.sizes()
    empty = np.flatnonzero(sizes == 0)
    if empty.size:
        raise EmptyClusterError(int(empty[0]))

    k = p.k
    onehot = np.zeros((w.size, k))
    onehot[np.arange(w.size), p.labels] = 1.0
    sums = onehot.T @ w.weights @ onehot
    sums = (sums + sums.T) / 2.0

    pair_counts = np.outer(sizes, sizes).astype(float)
    between = sums / pair_counts
    np.fill_diagonal(between, np.nan)
    ordered_pairs = sizes * (sizes - 1.0)
    within = np.zeros(k)
    multi = sizes > 1
    within[multi] = np.diag(sums)[multi] / ordered_pairs[multi]

    delta_raw = within - np.nansum(between, axis=1) / (k - 1)
    top = delta_raw.max()
    degenerate = not top > 0
    delta_norm = np.full(k, np.nan) if degenerate else delta_raw / top
    outlier = int(np.argmin(within))
    return ClusterStats(within, between, delta_raw, delta_norm, outlier, degenerate)


def f_score(stats: ClusterStats) -> float:
    """Lowest normalized density among inlier clusters minus the outlier cluster's."""
    if stats.degenerate:
        raise DegenerateStatsError("no cluster has positive isolation; score undefined")
    d = stats.delta_norm
    inliers = np.delete(d, stats.outlier_index)
    return float(inliers.min() - d[stats.outlier_index])


def _score_k(w, k, kind, seed, eig) -> tuple[float, Partition | None, ClusterStats | None]:
    try:
        part = spectral_cluster(w, k, kind, seed=seed, eig=eig)
        stats = cluster_stats(w, part)
        return f_score(stats), part, stats
    except (EmptyClusterError, DegenerateStatsError) as exc:
        log.debug("K=%d scored -inf: %s", k, exc)
        return float("-inf"), None, None


def estimate(
    w: AffinityMatrix,
    k_min: int = 3,
    k_max: int = 10,
    kind: LaplacianKind = DEFAULT_KIND,
    seed: int = 0,
    eig: EigenDecomposition | None = None,
) -> IdcResult:
    """Sweep K over ``[k_min, k_max]`` and keep the partition with the best score.

    The Laplacian is decomposed once (or taken from ``eig``) and shared
    across K. K values whose
    clustering yields an empty cluster or no isolated cluster score ``-inf``.
    Ties go to the smaller K. The chosen partition's outlier cluster is
    ``result.stats.outlier_index``; the other ``chosen_k - 1`` clusters are
    the inlier clusters.
    """
    if not 2 <= k_min <= k_max <= w.size:
        raise InvalidRangeError(f"need 2 <= k_min <= k_max <= {w.size}, got [{k_min}, {k_max}]")
    if eig is None:
        eig = laplacian_eigen(w, kind)
    trace = []
    best = None
    for k in range(k_min, k_max + 1):
        score, part, stats = _score_k(w, k, kind, seed, eig)
        trace.append((k, score))
        log.info("K=%d f=%.6g", k, score)
        if part is not None and (best is None or score > best[0]):
            best = (score, k, part, stats)
    if best is None:
        raise AllDegenerateError(f"every K in [{k_min}, {k_max}] was degenerate")
    _, k, part, stats = best
    return IdcResult(k, part, stats, trace, k_min, k_max)


def outlier_labels(result: IdcResult) -> np.ndarray:
    return result.partition.labels == result.stats.outlier_index


def sparsest_cluster_outliers(w: AffinityMatrix, labels) -> np.ndarray:
    """Flag the members of the cluster with the lowest within-cluster density.

    Clusters are taken from ``labels`` as given (any integer ids); used to
    score fixed-K spectral clustering as an outlier detector.
    """
    lab = np.asarray(labels)
    ids = np.unique(lab)
    dens = []
    for c in ids:
        idx = np.flatnonzero(lab == c)
        n = idx.size
        dens.append(0.0 if n == 1 else w.weights[np.ix_(idx, idx)].sum() / (n * (n - 1.0)))
    return lab == ids[int(np.argmin(dens))]

