"""Normalized-cut and association criteria, and the outlier-gap analysis.

Link weights sum over ordered vertex pairs, so ``link_weight(w, a, a)``
counts every undirected edge inside ``a`` twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import AffinityMatrix, IdcError, Partition


class IndexOutOfRangeError(IdcError):
    pass


class DegenerateClusterError(IdcError):
    def __init__(self, cluster, msg: str | None = None):
        super().__init__(msg or f"cluster {cluster} has zero total degree")
        self.cluster = cluster


class NonPositiveInputError(IdcError):
    pass


class NoStrongLinksError(IdcError):
    pass


class NoWeakLinksError(IdcError):
    pass


def _vertex_set(w: AffinityMatrix, a) -> np.ndarray:
    idx = np.unique(np.asarray(a, dtype=np.int64).ravel())
    if idx.size and (idx[0] < 0 or idx[-1] >= w.size):
        raise IndexOutOfRangeError(f"vertex index outside [0, {w.size})")
    return idx


def link_weight(w: AffinityMatrix, a, b) -> float:
    """Total weight ``sum_{i in a, j in b} W_ij`` (sets may overlap)."""
    ia, ib = _vertex_set(w, a), _vertex_set(w, b)
    if ia.size == 0 or ib.size == 0:
        return 0.0
    return float(w.weights[np.ix_(ia, ib)].sum())


def _bisection(w: AffinityMatrix, a):
    ia = _vertex_set(w, a)
    if ia.size == 0 or ia.size == w.size:
        raise IdcError("a must be a nonempty proper subset of the vertices")
    ib = np.setdiff1d(np.arange(w.size), ia)
    vol_a = link_weight(w, ia, np.arange(w.size))
    vol_b = link_weight(w, ib, np.arange(w.size))
    if vol_a <= 0 or vol_b <= 0:
        raise DegenerateClusterError("a" if vol_a <= 0 else "complement")
    return ia, ib, vol_a, vol_b


def ncut2(w: AffinityMatrix, a) -> float:
    ia, ib, vol_a, vol_b = _bisection(w, a)
    cut = link_weight(w, ia, ib)
    return cut / vol_a + cut / vol_b


def nassoc2(w: AffinityMatrix, a) -> float:
    ia, ib, vol_a, vol_b = _bisection(w, a)
    return link_weight(w, ia, ia) / vol_a + link_weight(w, ib, ib) / vol_b


def _assoc_and_volume(w: AffinityMatrix, p: Partition):
    if p.size != w.size:
        raise IdcError(f"partition covers {p.size} vertices, affinity has {w.size}")
    onehot = np.zeros((w.size, p.k))
    onehot[np.arange(w.size), p.labels] = 1.0
    vol = onehot.T @ w.degrees
    assoc = np.einsum("il,ij,jl->l", onehot, w.weights, onehot)
    bad = np.flatnonzero(vol <= 0)
    if bad.size:
        raise DegenerateClusterError(int(bad[0]))
    return assoc, vol


def k_ncut(w: AffinityMatrix, p: Partition) -> float:
    assoc, vol = _assoc_and_volume(w, p)
    return float(np.mean((vol - assoc) / vol))


def k_assoc(w: AffinityMatrix, p: Partition) -> float:
    assoc, vol = _assoc_and_volume(w, p)
    return float(np.mean(assoc / vol))


def association_sum(w: AffinityMatrix, p: Partition) -> float:
    """Unaveraged association, ``K * k_assoc``."""
    assoc, vol = _assoc_and_volume(w, p)
    return float(np.sum(assoc / vol))


@dataclass(frozen=True)
class OutlierGapParams:
    mu_in: float
    mu_out: float
    n_in: int
    n_total: int
    n_out: int = 0

    def __post_init__(self):
        if not (self.mu_in > 0 and self.mu_out > 0):
            raise NonPositiveInputError("mu_in and mu_out must be positive")
        if not 0 < self.n_in < self.n_total:
            raise IdcError("need 0 < n_in < n_total")
        if self.n_out < 0:
            raise IdcError("n_out must be nonnegative")


def outlier_gap_closed_form(p: OutlierGapParams) -> float:
    """Approximate association gain from moving one outlier out of an inlier cluster.

    Difference between the 2-way association with the probe vertex in the
    outlier cluster and with it in the inlier cluster, when strong links
    have mean ``mu_in`` and all other links mean ``mu_out``.
    """
    mi, mo, ni, n = p.mu_in, p.mu_out, float(p.n_in), float(p.n_total)
    base = mi * ni**2 + mo * ni * (n - ni)
    z = base * (base + mo * n)
    return (mo * ni**2 * n * (mi - 2.0 * mo) + 2.0 * mo**2 * ni**3) / z + 1.0 / n


def separation_condition(mu_in: float, mu_out: float) -> bool:
    if not (mu_in > 0 and mu_out > 0):
        raise NonPositiveInputError("mu_in and mu_out must be positive")
    return mu_in > 2.0 * mu_out


def empirical_mu(w, labels) -> tuple[float, float]:
    """Mean strong-link and weak-link weights under ground-truth ``labels``.

    Strong links join two vertices of the same inlier cluster (label > 0);
    every other pair, including pairs of outliers, is a weak link. ``w`` may
    be an :class:`AffinityMatrix` or any symmetric array, e.g. an unshifted
    cosine similarity matrix.
    """
    weights = w.weights if isinstance(w, AffinityMatrix) else np.asarray(w, dtype=float)
    y = np.asarray(labels)
    iu = np.triu_indices(y.size, 1)
    strong = (y[iu[0]] == y[iu[1]]) & (y[iu[0]] > 0)
    vals = weights[iu]
    if not strong.any():
        raise NoStrongLinksError("no pair of vertices shares an inlier cluster")
    if strong.all():
        raise NoWeakLinksError("every pair of vertices is a strong link")
    return float(vals[strong].mean()), float(vals[~strong].mean())


def local_optimality(w: AffinityMatrix, partitions: Sequence[Partition]) -> bool:
    """Whether the middle of three nested-K partitions is a local association optimum.

    ``partitions`` hold ``n-1``, ``n`` and ``n+1`` clusters. Each is weighted
    by its own cluster count, i.e. the unaveraged association sums must rise
    into the middle partition and fall after it.
    """
    lower, mid, upper = partitions
    if not (lower.k == mid.k - 1 and upper.k == mid.k + 1):
        raise IdcError("partitions must have K-1, K and K+1 clusters")
    s_lo = lower.k * k_assoc(w, lower)
    s_mid = mid.k * k_assoc(w, mid)
    s_hi = upper.k * k_assoc(w, upper)
    return s_lo < s_mid and s_mid > s_hi
