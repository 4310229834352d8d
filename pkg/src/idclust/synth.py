"""Synthetic inlier/outlier datasets in D dimensions.

Cluster centers and outliers are uniform in ``(-1, 1)^D``; each inlier is
its cluster center plus independent normal noise per coordinate.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import IdcError, LabeledDataset, make_dataset


class ConfigError(IdcError):
    pass


@dataclass(frozen=True)
class GaussianSizes:
    """Draw a count from N(mean, std), rounded and clamped below at ``minimum``."""

    mean: float
    std: float
    minimum: int = 1


@dataclass(frozen=True)
class SynthConfig:
    dim: int
    n_inlier_clusters: int = 5
    cluster_sizes: int | GaussianSizes = 30
    n_outliers: int | GaussianSizes = 150
    inlier_std: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError(f"dim must be >= 1, got {self.dim}")
        if self.n_inlier_clusters < 1:
            raise ConfigError(f"n_inlier_clusters must be >= 1, got {self.n_inlier_clusters}")
        if not self.inlier_std >= 0:
            raise ConfigError(f"inlier_std must be >= 0, got {self.inlier_std}")
        if isinstance(self.cluster_sizes, int) and self.cluster_sizes < 1:
            raise ConfigError("fixed cluster size must be >= 1")
        if isinstance(self.n_outliers, int) and self.n_outliers < 0:
            raise ConfigError("fixed outlier count must be >= 0")
        for spec in (self.cluster_sizes, self.n_outliers):
            if isinstance(spec, GaussianSizes) and not (spec.mean > 0 and spec.std >= 0):
                raise ConfigError("gaussian size spec needs mean > 0 and std >= 0")

    @classmethod
    def from_dict(cls, d: dict) -> "SynthConfig":
        d = dict(d)
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "dim" not in d:
            raise ConfigError("config needs 'dim'")
        try:
            for key, floor in (("cluster_sizes", 1), ("n_outliers", 0)):
                v = d.get(key)
                if isinstance(v, dict):
                    d[key] = GaussianSizes(float(v["mean"]), float(v["std"]), int(v.get("minimum", floor)))
                elif v is not None:
                    if isinstance(v, bool) or float(v) != int(v):
                        raise ConfigError(f"{key} must be an integer or a {{mean, std}} object")
                    d[key] = int(v)
            for key in ("dim", "n_inlier_clusters", "seed"):
                if key in d:
                    if isinstance(d[key], bool) or float(d[key]) != int(d[key]):
                        raise ConfigError(f"{key} must be an integer")
                    d[key] = int(d[key])
            if "inlier_std" in d:
                d["inlier_std"] = float(d["inlier_std"])
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


def sizes_from_gaussian(mean: float, std: float, n: int, seed: int = 0, minimum: int = 1) -> np.ndarray:
    """``n`` integer sizes: ``round(N(mean, std))`` clamped to at least ``minimum``."""
    if not mean > 0:
        raise ConfigError(f"mean must be positive, got {mean}")
    rng = np.random.default_rng(seed)
    draws = rng.normal(mean, std, size=n) if std > 0 else np.full(n, float(mean))
    return np.maximum(np.rint(draws), minimum).astype(np.int64)


def _realize(spec, n: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    if isinstance(spec, GaussianSizes):
        seed = int(seed_seq.generate_state(1)[0])
        return sizes_from_gaussian(spec.mean, spec.std, n, seed, spec.minimum)
    return np.full(n, int(spec), dtype=np.int64)


def realized_sizes(cfg: SynthConfig) -> tuple[np.ndarray, int]:
    """Inlier cluster sizes and outlier count that ``generate(cfg)`` will use."""
    ss_sizes, ss_out, _ = np.random.SeedSequence(cfg.seed).spawn(3)
    sizes = _realize(cfg.cluster_sizes, cfg.n_inlier_clusters, ss_sizes)
    n_out = int(_realize(cfg.n_outliers, 1, ss_out)[0])
    return sizes, n_out


def generate(cfg: SynthConfig) -> LabeledDataset:
    """Sample a labeled dataset; inliers come first, cluster by cluster, then outliers."""
    sizes, n_out = realized_sizes(cfg)
    _, _, ss_points = np.random.SeedSequence(cfg.seed).spawn(3)
    rng = np.random.default_rng(ss_points)

    centers = rng.uniform(-1.0, 1.0, size=(cfg.n_inlier_clusters, cfg.dim))
    blocks, labels = [], []
    for c, n in enumerate(sizes):
        noise = rng.normal(0.0, 1.0, size=(n, cfg.dim)) * cfg.inlier_std
        blocks.append(centers[c] + noise)
        labels.append(np.full(n, c + 1, dtype=np.int64))
    blocks.append(rng.uniform(-1.0, 1.0, size=(n_out, cfg.dim)))
    labels.append(np.zeros(n_out, dtype=np.int64))
    return make_dataset(np.vstack(blocks), np.concatenate(labels), cfg.n_inlier_clusters)
