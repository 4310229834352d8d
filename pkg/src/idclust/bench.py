"""Dimension-sweep benchmark on synthetic inlier/outlier data.

Every (dimension, trial) cell draws its own dataset from a seed derived from
the master seed, the dimension and the trial index, so cells can run in any
order or in parallel without changing results.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .affinity import AffinityKind
from .core import IdcError
from .dbscan import dbscan_from_distances, distance_matrix, grid_search, noise_as_singletons
from .idc import estimate, outlier_labels, sparsest_cluster_outliers
from .metrics import adjusted_mutual_info, adjusted_rand_index, outlier_f1
from .spectral import LaplacianKind, laplacian_eigen, spectral_cluster
from .synth import GaussianSizes, SynthConfig, generate

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
METHODS = ("idc", "sc_n", "sc_n1", "dbscan_grid")
DEFAULT_EPS_GRID = tuple(round(0.05 * i, 2) for i in range(1, 21))
DEFAULT_MIN_SAMPLES_GRID = (2, 3, 5, 10, 20)
FIELDS = ("schema_version", "dim", "trial", "method", "ami", "ari", "f1", "est_k")


@dataclass(frozen=True)
class BenchConfig:
    dims: tuple[int, ...] = (64, 256, 512)
    trials: int = 20
    methods: tuple[str, ...] = ("sc_n1", "dbscan_grid")
    seed: int = 0
    n_inlier_clusters: int = 5
    cluster_sizes: int | GaussianSizes = 30
    n_outliers: int | GaussianSizes = 150
    inlier_std: float = 1.0
    affinity: AffinityKind = field(default_factory=AffinityKind)
    laplacian: LaplacianKind = LaplacianKind.SYMMETRIC
    k_min: int = 3
    k_max: int = 10
    eps_grid: tuple[float, ...] = DEFAULT_EPS_GRID
    min_samples_grid: tuple[int, ...] = DEFAULT_MIN_SAMPLES_GRID
    dbscan_metric: str = "cosine"

    def __post_init__(self):
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise IdcError(f"unknown methods {bad}; choose from {METHODS}")
        if self.trials < 1 or not self.dims:
            raise IdcError("need at least one dimension and one trial")


def trial_seed(master: int, dim: int, trial: int) -> int:
    return int(np.random.SeedSequence([master, dim, trial]).generate_state(1)[0])


def trial_dataset(cfg: BenchConfig, dim: int, trial: int):
    synth = SynthConfig(
        dim=dim,
        n_inlier_clusters=cfg.n_inlier_clusters,
        cluster_sizes=cfg.cluster_sizes,
        n_outliers=cfg.n_outliers,
        inlier_std=cfg.inlier_std,
        seed=trial_seed(cfg.seed, dim, trial),
    )
    return generate(synth)


def _n_clusters(labels) -> int:
    return int(np.unique(labels).size)


def run_trial(cfg: BenchConfig, dim: int, trial: int) -> list[dict]:
    ds = trial_dataset(cfg, dim, trial)
    seed = trial_seed(cfg.seed, dim, trial)
    truth, truth_out = ds.labels, ds.is_outlier
    n_in = ds.n_inlier_clusters
    rows = []

    w = eig = None
    if any(m != "dbscan_grid" for m in cfg.methods):
        w = cfg.affinity.build(ds.features)
        eig = laplacian_eigen(w, cfg.laplacian)

    for method in cfg.methods:
        t0 = time.perf_counter()
        if method in ("sc_n", "sc_n1"):
            k = n_in if method == "sc_n" else n_in + 1
            if k < 2:
                raise IdcError(f"{method} needs at least 2 clusters")
            labels = spectral_cluster(w, k, cfg.laplacian, seed=seed, eig=eig).labels
            pred_out = sparsest_cluster_outliers(w, labels)
            est_k = k
        elif method == "idc":
            res = estimate(w, cfg.k_min, min(cfg.k_max, w.size), cfg.laplacian, seed=seed, eig=eig)
            labels, pred_out, est_k = res.partition.labels, outlier_labels(res), res.chosen_k
        else:
            best, _ = grid_search(ds.features, truth, cfg.eps_grid, cfg.min_samples_grid, cfg.dbscan_metric)
            raw, pred_out = dbscan_from_distances(
                distance_matrix(ds.features, cfg.dbscan_metric), best.eps, best.min_samples
            )
            labels = noise_as_singletons(raw)
            est_k = _n_clusters(raw[~pred_out]) if (~pred_out).any() else 0
        rows.append(
            {
                "dim": dim,
                "trial": trial,
                "method": method,
                "ami": adjusted_mutual_info(truth, labels),
                "ari": adjusted_rand_index(truth, labels),
                "f1": outlier_f1(truth_out, pred_out),
                "est_k": est_k,
                "wall_time_s": time.perf_counter() - t0,
            }
        )
        log.info("dim=%d trial=%d %s ami=%.3f f1=%.3f", dim, trial, method, rows[-1]["ami"], rows[-1]["f1"])
    return rows


def _run_cell(args):
    cfg, dim, trial = args
    return run_trial(cfg, dim, trial)


def run_bench(cfg: BenchConfig, jobs: int = 1) -> list[dict]:
    """Per-trial rows sorted by (dim, trial, method)."""
    cells = [(cfg, d, t) for d in cfg.dims for t in range(cfg.trials)]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, cells))
    else:
        results = [_run_cell(c) for c in cells]
    rows = [r for batch in results for r in batch]
    order = {m: i for i, m in enumerate(METHODS)}
    rows.sort(key=lambda r: (r["dim"], r["trial"], order[r["method"]]))
    return rows


def aggregate(rows: list[dict]) -> list[dict]:
    groups: dict[tuple[int, str], list[dict]] = {}
    for r in rows:
        groups.setdefault((r["dim"], r["method"]), []).append(r)
    order = {m: i for i, m in enumerate(METHODS)}
    out = []
    for (dim, method), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], order[kv[0][1]])):
        agg = {"dim": dim, "trial": "mean", "method": method}
        for key in ("ami", "ari", "f1", "est_k", "wall_time_s"):
            agg[key] = float(np.mean([r[key] for r in rs]))
        out.append(agg)
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10f}"
    return str(v)


def to_csv(rows: list[dict], timing: bool = False) -> str:
    fields = FIELDS + (("wall_time_s",) if timing else ())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows + aggregate(rows):
        r = dict(r, schema_version=SCHEMA_VERSION)
        if r["trial"] != "mean":
            r["est_k"] = int(r["est_k"])
        writer.writerow([_fmt(r[f]) for f in fields])
    return buf.getvalue()


def config_from_dict(d: dict, base: BenchConfig | None = None) -> BenchConfig:
    """Overlay a JSON-style dict on ``base`` (defaults if omitted)."""
    cfg = base or BenchConfig()
    d = dict(d)
    known = set(BenchConfig.__dataclass_fields__) | {"gamma"}
    unknown = set(d) - known
    if unknown:
        raise IdcError(f"unknown bench config keys: {sorted(unknown)}")
    try:
        for key in ("cluster_sizes", "n_outliers"):
            if isinstance(d.get(key), dict):
                v = d[key]
                d[key] = GaussianSizes(float(v["mean"]), float(v["std"]), int(v.get("minimum", 1 if key == "cluster_sizes" else 0)))
        for key in ("dims", "methods", "eps_grid", "min_samples_grid"):
            if key in d:
                d[key] = tuple(d[key])
        if "affinity" in d or "gamma" in d:
            d["affinity"] = AffinityKind(d.pop("affinity", cfg.affinity.name), float(d.pop("gamma", cfg.affinity.gamma)))
        if "laplacian" in d:
            d["laplacian"] = LaplacianKind(d["laplacian"])
    except (TypeError, ValueError, KeyError) as exc:
        raise IdcError(f"malformed bench config: {exc}") from exc
    return replace(cfg, **d)
