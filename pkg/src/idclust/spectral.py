"""Graph Laplacians, spectral embedding, and spectral clustering for a fixed K."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .core import AffinityMatrix, Partition, make_partition
from .numerics import EigenDecomposition, KTooLargeError, kmeans, sym_eigen


class LaplacianKind(str, Enum):
    UNNORMALIZED = "unnorm"
    SYMMETRIC = "sym"


DEFAULT_KIND = LaplacianKind.SYMMETRIC


def laplacian(w: AffinityMatrix, kind: LaplacianKind = DEFAULT_KIND) -> np.ndarray:
    """``D - W`` or ``I - D^-1/2 W D^-1/2`` (isolated vertices get ``D^-1/2 = 0``)."""
    kind = LaplacianKind(kind)
    weights = w.weights
    deg = weights.sum(axis=1)
    if kind is LaplacianKind.UNNORMALIZED:
        return np.diag(deg) - weights
    inv_sqrt = np.zeros_like(deg)
    pos = deg > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    lap = np.eye(w.size) - inv_sqrt[:, None] * weights * inv_sqrt[None, :]
    return (lap + lap.T) / 2.0


def laplacian_eigen(w: AffinityMatrix, kind: LaplacianKind = DEFAULT_KIND) -> EigenDecomposition:
    return sym_eigen(laplacian(w, kind))


def embed_from_eigen(eig: EigenDecomposition, k: int, kind: LaplacianKind = DEFAULT_KIND) -> np.ndarray:
    n = eig.vectors.shape[0]
    if not 1 <= k <= n:
        raise KTooLargeError(f"k must lie in [1, {n}], got {k}")
    u = eig.vectors[:, :k].copy()
    if LaplacianKind(kind) is LaplacianKind.SYMMETRIC:
        norms = np.linalg.norm(u, axis=1)
        nz = norms > 0
        u[nz] /= norms[nz, None]
    return u


def spectral_embed(w: AffinityMatrix, k: int, kind: LaplacianKind = DEFAULT_KIND) -> np.ndarray:
    """Rows are vertex coordinates in the ``k`` lowest Laplacian eigenvectors.

    For the symmetric normalized Laplacian each row is rescaled to unit
    length; all-zero rows (isolated vertices) stay at the origin.
    """
    if not 1 <= k <= w.size:
        raise KTooLargeError(f"k must lie in [1, {w.size}], got {k}")
    return embed_from_eigen(laplacian_eigen(w, kind), k, kind)


def spectral_cluster(
    w: AffinityMatrix,
    k: int,
    kind: LaplacianKind = DEFAULT_KIND,
    seed: int = 0,
    n_restarts: int = 10,
    eig: EigenDecomposition | None = None,
) -> Partition:
    """k-means on the spectral embedding.

    Pass a precomputed ``eig`` (from :func:`laplacian_eigen` with the same
    ``kind``) to cluster one graph at several K without repeating the
    decomposition. The partition may contain an empty cluster only when
    k-means degenerates.
    """
    if not 2 <= k <= w.size:
        raise KTooLargeError(f"k must lie in [2, {w.size}], got {k}")
    if eig is None:
        eig = laplacian_eigen(w, kind)
    u = embed_from_eigen(eig, k, kind)
    res = kmeans(u, k, seed=seed, n_restarts=n_restarts)
    return make_partition(res.labels, k)
