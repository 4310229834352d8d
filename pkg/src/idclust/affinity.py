"""Affinity matrices from feature vectors or per-frame comparisons."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import AffinityMatrix, IdcError, validate_affinity


class ZeroNormRowError(IdcError):
    def __init__(self, row: int):
        super().__init__(f"row {row} has zero norm; cosine similarity is undefined")
        self.row = row


class NonPositiveGammaError(IdcError):
    pass


class MissingPairError(IdcError):
    def __init__(self, a: int, b: int):
        super().__init__(f"no frame affinities for tracklet pair ({a}, {b})")
        self.pair = (a, b)


class IdOutOfRangeError(IdcError):
    pass


@dataclass(frozen=True)
class AffinityKind:
    """Either ``"cosine"`` (cosine similarity shifted by +1) or ``"gaussian"``."""

    name: str = "cosine"
    gamma: float = 1.0
    squared: bool = False

    def __post_init__(self):
        if self.name not in ("cosine", "gaussian"):
            raise IdcError(f"unknown affinity kind {self.name!r}")
        if self.name == "gaussian" and not self.gamma > 0:
            raise NonPositiveGammaError(f"gamma must be positive, got {self.gamma}")

    def build(self, features) -> AffinityMatrix:
        if self.name == "cosine":
            return cosine_affinity(features)
        return gaussian_affinity(features, self.gamma, squared=self.squared)


def _unit_rows(features) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise IdcError(f"features must be 2-d, got shape {x.shape}")
    norms = np.linalg.norm(x, axis=1)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise ZeroNormRowError(int(zero[0]))
    return x / norms[:, None]


def cosine_similarity(features) -> np.ndarray:
    """Plain pairwise cosine similarity in [-1, 1], diagonal zeroed.

    Not a valid affinity (it can be negative); used where the unshifted
    similarity itself is the quantity of interest.
    """
    u = _unit_rows(features)
    s = np.clip(u @ u.T, -1.0, 1.0)
    s = (s + s.T) / 2.0
    np.fill_diagonal(s, 0.0)
    return s


def cosine_affinity(features) -> AffinityMatrix:
    """``W_ij = cos(x_i, x_j) + 1``, so every weight lies in [0, 2]."""
    s = cosine_similarity(features) + 1.0
    np.fill_diagonal(s, 0.0)
    return validate_affinity(s)


def pairwise_distances(features) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    sq = np.einsum("ij,ij->i", x, x)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    d2 = (d2 + d2.T) / 2.0
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(d2)


def gaussian_affinity(features, gamma: float = 1.0, squared: bool = False) -> AffinityMatrix:
    """``W_ij = exp(-||x_i - x_j|| / (2 gamma^2))``.

    The distance enters unsquared by default; ``squared=True`` gives the
    usual RBF kernel ``exp(-||x_i - x_j||^2 / (2 gamma^2))``.
    """
    if not gamma > 0:
        raise NonPositiveGammaError(f"gamma must be positive, got {gamma}")
    d = pairwise_distances(features)
    if squared:
        d = d * d
    w = np.exp(-d / (2.0 * gamma * gamma))
    np.fill_diagonal(w, 0.0)
    return validate_affinity(w)


def tracklet_median_affinity(
    frame_affinities: Iterable[tuple[int, int, float]], n_tracklets: int
) -> AffinityMatrix:
    """Aggregate frame-pair affinities into one weight per tracklet pair.

    Each triple ``(a, b, value)`` is one frame-pair comparison between
    tracklets ``a`` and ``b`` (order irrelevant). The weight of a pair is the
    median of its values; an even count takes the mean of the middle two.
    Every distinct pair must have at least one value.
    """
    values: dict[tuple[int, int], list[float]] = defaultdict(list)
    for a, b, v in frame_affinities:
        a, b = int(a), int(b)
        if not (0 <= a < n_tracklets and 0 <= b < n_tracklets):
            raise IdOutOfRangeError(f"tracklet id out of range [0, {n_tracklets}): ({a}, {b})")
        if a == b:
            continue
        values[(min(a, b), max(a, b))].append(float(v))

    w = np.zeros((n_tracklets, n_tracklets))
    for a in range(n_tracklets):
        for b in range(a + 1, n_tracklets):
            vals = values.get((a, b))
            if not vals:
                raise MissingPairError(a, b)
            w[a, b] = w[b, a] = np.median(vals)
    return validate_affinity(w)
