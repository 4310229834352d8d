"""DBSCAN baseline with brute-force neighborhoods and a best-AMI grid search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .affinity import _unit_rows, pairwise_distances
from .core import IdcError
from .metrics import adjusted_mutual_info

NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    eps: float
    min_samples: int
    metric: str = "cosine"

    def __post_init__(self):
        if not self.eps > 0:
            raise IdcError(f"eps must be positive, got {self.eps}")
        if self.min_samples < 1:
            raise IdcError(f"min_samples must be >= 1, got {self.min_samples}")
        if self.metric not in ("euclidean", "cosine"):
            raise IdcError(f"unknown metric {self.metric!r}")


def distance_matrix(features, metric: str) -> np.ndarray:
    if metric == "euclidean":
        return pairwise_distances(features)
    u = _unit_rows(features)
    d = 1.0 - np.clip(u @ u.T, -1.0, 1.0)
    d = np.maximum((d + d.T) / 2.0, 0.0)
    np.fill_diagonal(d, 0.0)
    return d


def dbscan_from_distances(dist: np.ndarray, eps: float, min_samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Classic single-pass DBSCAN on a precomputed distance matrix.

    Points are scanned in index order; a border point reachable from several
    clusters stays in the first cluster that reaches it.
    """
    n = dist.shape[0]
    neighbors = [np.flatnonzero(row <= eps) for row in dist]
    core = np.array([nb.size >= min_samples for nb in neighbors], dtype=bool)
    labels = np.full(n, NOISE, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if labels[i] != NOISE or not core[i]:
            continue
        labels[i] = cluster
        queue = deque([i])
        while queue:
            j = queue.popleft()
            if not core[j]:
                continue
            for nb in neighbors[j]:
                if labels[nb] == NOISE:
                    labels[nb] = cluster
                    queue.append(nb)
        cluster += 1
    return labels, labels == NOISE


def dbscan(features, params: DbscanParams) -> tuple[np.ndarray, np.ndarray]:
    """Cluster labels (``-1`` for noise) and the noise mask."""
    return dbscan_from_distances(distance_matrix(features, params.metric), params.eps, params.min_samples)


def noise_as_singletons(labels: np.ndarray) -> np.ndarray:
    """Give each noise point its own cluster id so it can enter AMI/ARI."""
    out = np.asarray(labels, dtype=np.int64).copy()
    noise = out == NOISE
    start = out.max() + 1 if (~noise).any() else 0
    out[noise] = start + np.arange(noise.sum())
    return out


def grid_search(
    features,
    truth,
    eps_grid: Sequence[float],
    min_samples_grid: Sequence[int],
    metric: str = "cosine",
) -> tuple[DbscanParams, float]:
    """Pick the (eps, min_samples) cell with the highest AMI against ``truth``.

    Cells are visited eps-major in the given order; the first cell reaching
    the best score wins.
    """
    if len(eps_grid) == 0 or len(min_samples_grid) == 0:
        raise IdcError("grids must be nonempty")
    dist = distance_matrix(features, metric)
    best = None
    for eps in eps_grid:
        for ms in min_samples_grid:
            params = DbscanParams(float(eps), int(ms), metric)
            labels, _ = dbscan_from_distances(dist, params.eps, params.min_samples)
            score = adjusted_mutual_info(truth, noise_as_singletons(labels))
            if best is None or score > best[1]:
                best = (params, score)
    return best
