"""Dense symmetric eigendecomposition (cyclic Jacobi) and k-means.

The Jacobi solver sweeps over all index pairs in round-robin order: each
round pairs every index with exactly one other, so the ``M/2`` rotations of
a round touch disjoint rows and columns and can be applied at once as
vectorized numpy updates. One sweep is ``M - 1`` rounds and covers every
pair exactly once, the same work as a row-cyclic sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import SYMMETRY_TOL, IdcError


class NotSymmetricError(IdcError):
    pass


class NoConvergenceError(IdcError):
    def __init__(self, max_sweeps: int, off: float):
        super().__init__(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3g})")
        self.max_sweeps = max_sweeps


class KTooLargeError(IdcError):
    pass


class EmptyInputError(IdcError):
    pass


MAX_SWEEPS = 100
OFF_TOL = 1e-12
MAX_LLOYD_ITER = 300


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # column j belongs to values[j]
    sweeps: int = 0


@lru_cache(maxsize=32)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # circle method: fix slot 0, rotate the rest; a dummy index pads odd n
    m = n + (n % 2)
    ring = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p = np.array(ring[: m // 2])
        q = np.array(ring[m // 2 :][::-1])
        keep = (p < n) & (q < n)
        p, q = p[keep], q[keep]
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        ring = [ring[0], ring[-1]] + ring[1:-1]
    return tuple(rounds)


def _rotation(app, aqq, apq):
    """Cosine and sine zeroing ``apq`` (vectorized symmetric Schur step)."""
    nz = apq != 0
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        tau = (aqq - app) / (2.0 * np.where(nz, apq, 1.0))
    huge = ~(np.abs(tau) < 1e100)
    tt = np.where(huge, 0.0, tau)
    t = np.where(tt >= 0, 1.0, -1.0) / (np.abs(tt) + np.sqrt(1.0 + tt * tt))
    with np.errstate(divide="ignore"):
        t = np.where(huge, 0.5 / np.where(huge, tau, 1.0), t)
    t = np.where(nz, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def _off_norm(a: np.ndarray, mask: np.ndarray) -> float:
    return float(np.linalg.norm(a[mask]))


def sym_eigen(matrix, max_sweeps: int = MAX_SWEEPS, tol: float = OFF_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Iterates until the off-diagonal Frobenius norm drops to
    ``tol * ||A||_F``. Eigenvalues come back ascending; each eigenvector's
    largest-magnitude entry is made positive so the output is unique up to
    rotations within repeated eigenvalues.
    """
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise EmptyInputError("empty matrix")
    asym = float(np.max(np.abs(a - a.T)))
    if asym > SYMMETRY_TOL:
        raise NotSymmetricError(f"max |A_ij - A_ji| = {asym:.3g} exceeds {SYMMETRY_TOL:g}")
    a = (a + a.T) / 2.0
    v = np.eye(n)
    fro = float(np.linalg.norm(a))
    mask = ~np.eye(n, dtype=bool)
    rounds = _round_robin(n)

    sweeps = 0
    off = _off_norm(a, mask) if n > 1 else 0.0
    while off > tol * fro:
        if sweeps >= max_sweeps:
            raise NoConvergenceError(max_sweeps, off)
        for p, q in rounds:
            c, s = _rotation(a[p, p], a[q, q], a[p, q])
            # A <- J^T A J, columns then rows
            ap, aq = a[:, p], a[:, q]
            a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
            ap, aq = a[p, :], a[q, :]
            a[p, :], a[q, :] = c[:, None] * ap - s[:, None] * aq, s[:, None] * ap + c[:, None] * aq
            vp, vq = v[:, p], v[:, q]
            v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        sweeps += 1
        off = _off_norm(a, mask)

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values, v = values[order], v[:, order]
    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[pivot, np.arange(n)] < 0, -1.0, 1.0)
    return EigenDecomposition(values, v * signs, sweeps)


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    n_iter: int = 0
    inertia_history: list[float] = field(default_factory=list)


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = (
        np.einsum("ij,ij->i", points, points)[:, None]
        - 2.0 * points @ centers.T
        + np.einsum("ij,ij->i", centers, centers)[None, :]
    )
    return np.maximum(d, 0.0)


def _kmeanspp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Greedy k-means++: each step keeps the best of a few D^2-sampled candidates."""
    n = points.shape[0]
    n_trials = 2 + int(math.log(k))
    centers = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centers[0] = points[first]
    closest = _sq_dists(points, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        if total <= 0:
            cand = rng.integers(n, size=n_trials)
        else:
            cand = np.searchsorted(np.cumsum(closest), rng.random(n_trials) * total, side="right")
            cand = np.minimum(cand, n - 1)
        d_cand = _sq_dists(points, points[cand])
        pot = np.minimum(closest[:, None], d_cand).sum(axis=0)
        best = int(np.argmin(pot))
        centers[c] = points[cand[best]]
        closest = np.minimum(closest, d_cand[:, best])
    return centers


def _update_centers(points, labels, k, old_centers):
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((k, points.shape[1]))
    np.add.at(sums, labels, points)
    centers = old_centers.copy()
    full = counts > 0
    centers[full] = sums[full] / counts[full, None]
    empty = np.flatnonzero(~full)
    if empty.size:
        # reseed each empty center on the point farthest from its own center
        far = np.sum((points - centers[labels]) ** 2, axis=1)
        taken = set()
        for e in empty:
            order = np.argsort(-far, kind="stable")
            idx = next(int(i) for i in order if int(i) not in taken)
            taken.add(idx)
            centers[e] = points[idx]
    return centers


def _inertia(points, labels, centers) -> float:
    return float(np.sum((points - centers[labels]) ** 2))


def _lloyd(points: np.ndarray, centers: np.ndarray, max_iter: int) -> KMeansResult:
    k = centers.shape[0]
    labels = np.argmin(_sq_dists(points, centers), axis=1)
    history = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        centers = _update_centers(points, labels, k, centers)
        history.append(_inertia(points, labels, centers))
        new_labels = np.argmin(_sq_dists(points, centers), axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return KMeansResult(labels, centers, _inertia(points, labels, centers), n_iter, history)


def kmeans(points, k: int, seed: int = 0, n_restarts: int = 10, max_iter: int = MAX_LLOYD_ITER) -> KMeansResult:
    """Best-of-``n_restarts`` Lloyd k-means with greedy k-means++ seeding.

    Restart ``r`` draws from a generator seeded by ``(seed, r)``, so results
    do not depend on how restarts are scheduled. Ties in inertia keep the
    earliest restart.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] == 0:
        raise EmptyInputError("no points to cluster")
    if not 1 <= k <= x.shape[0]:
        raise KTooLargeError(f"k must lie in [1, {x.shape[0]}], got {k}")
    best = None
    for r in range(max(1, n_restarts)):
        rng = np.random.default_rng([seed, r])
        res = _lloyd(x, _kmeanspp(x, k, rng), max_iter)
        if best is None or res.inertia < best.inertia:
            best = res
    return best
