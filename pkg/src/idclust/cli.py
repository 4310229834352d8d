"""Command-line front end.

Subcommands: gen, affinity, cluster, estimate, bench, metrics. Set IDC_LOG
(e.g. ``IDC_LOG=INFO``) to change the log level.

Exit codes: 0 success, 2 invalid flags/config/data, 3 I/O failure,
4 every K in the search range was degenerate.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from . import bench
from .affinity import AffinityKind
from .core import AffinityMatrix, IdcError, LabeledDataset, make_dataset, validate_affinity
from .idc import AllDegenerateError, estimate, outlier_labels, sparsest_cluster_outliers
from .metrics import adjusted_mutual_info, adjusted_rand_index, cluster_count_error, outlier_f1
from .spectral import LaplacianKind, spectral_cluster
from .synth import SynthConfig, generate, realized_sizes

log = logging.getLogger("idclust")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DEGENERATE = 0, 2, 3, 4


class CliIOError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        with open(path, newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _csv_rows(path: str) -> list[list[str]]:
    return [row for row in csv.reader(_read_text(path).splitlines()) if row]


# dataset files: header f0..f{D-1},label


def dataset_to_csv(ds: LabeledDataset) -> str:
    lines = [",".join([f"f{d}" for d in range(ds.dim)] + ["label"])]
    for x, y in zip(ds.features, ds.labels):
        lines.append(",".join([repr(float(v)) for v in x] + [str(int(y))]))
    return "\n".join(lines) + "\n"


def read_dataset(path: str) -> LabeledDataset:
    rows = _csv_rows(path)
    if not rows or rows[0][-1] != "label" or not all(h.startswith("f") for h in rows[0][:-1]):
        raise IdcError(f"{path}: expected a header f0,...,f{{D-1}},label")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise IdcError(f"{path}: non-numeric entry ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != len(rows[0]):
        raise IdcError(f"{path}: ragged rows")
    return make_dataset(data[:, :-1], data[:, -1])


def matrix_to_csv(w: np.ndarray) -> str:
    return "\n".join(",".join(repr(float(v)) for v in row) for row in w) + "\n"


def read_matrix(path: str) -> AffinityMatrix:
    try:
        m = np.array([[float(v) for v in r] for r in _csv_rows(path)])
    except ValueError as exc:
        raise IdcError(f"{path}: non-numeric entry ({exc})") from exc
    return validate_affinity(m)


def read_labels(path: str) -> tuple[np.ndarray, np.ndarray | None]:
    """Labels and optional outlier flags from a result JSON or a CSV with a ``label`` column.

    A dataset CSV (feature columns plus ``label``) implies outlier flags via
    label 0; other CSVs carry flags only in an ``outlier`` column.
    """
    if path.endswith(".json"):
        try:
            obj = json.loads(_read_text(path))
        except json.JSONDecodeError as exc:
            raise IdcError(f"{path}: invalid JSON ({exc})") from exc
        if "labels" not in obj:
            raise IdcError(f"{path}: no 'labels' key")
        flags = np.array(obj["outlier"], dtype=bool) if "outlier" in obj else None
        return np.array(obj["labels"], dtype=np.int64), flags
    rows = _csv_rows(path)
    if not rows or "label" not in rows[0]:
        raise IdcError(f"{path}: expected a header with a 'label' column")
    header = rows[0]
    li = header.index("label")
    try:
        labels = np.array([int(float(r[li])) for r in rows[1:]], dtype=np.int64)
        if "outlier" in header:
            oi = header.index("outlier")
            flags = np.array([r[oi].strip().lower() in ("1", "true") for r in rows[1:]])
        elif any(h.startswith("f") and h[1:].isdigit() for h in header):
            flags = labels == 0
        else:
            flags = None
    except (ValueError, IndexError) as exc:
        raise IdcError(f"{path}: malformed row ({exc})") from exc
    return labels, flags


def _json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def _affinity_kind(args) -> AffinityKind:
    return AffinityKind(args.affinity, args.gamma, squared=getattr(args, "squared", False))


def _load_graph(args) -> tuple[AffinityMatrix, LabeledDataset | None]:
    if args.precomputed:
        return read_matrix(args.input), None
    ds = read_dataset(args.input)
    return _affinity_kind(args).build(ds.features), ds


# commands


def cmd_gen(args) -> int:
    try:
        raw = json.loads(_read_text(args.config))
    except json.JSONDecodeError as exc:
        raise IdcError(f"{args.config}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise IdcError("config must be a JSON object")
    if args.seed is not None:
        raw["seed"] = args.seed
    cfg = SynthConfig.from_dict(raw)
    ds = generate(cfg)
    _write_text(args.output, dataset_to_csv(ds))
    sizes, n_out = realized_sizes(cfg)
    sys.stdout.write(_json_line({"seed": cfg.seed, "cluster_sizes": sizes.tolist(), "n_outliers": n_out, "rows": ds.size}))
    return EXIT_OK


def cmd_affinity(args) -> int:
    ds = read_dataset(args.input)
    w = _affinity_kind(args).build(ds.features)
    _write_text(args.output, matrix_to_csv(w.weights))
    return EXIT_OK


def cmd_cluster(args) -> int:
    w, _ = _load_graph(args)
    part = spectral_cluster(w, args.k, LaplacianKind(args.laplacian), seed=args.seed)
    out = sparsest_cluster_outliers(w, part.labels)
    result = {"k": part.k, "labels": part.labels.tolist(), "outlier": out.tolist(), "seed": args.seed}
    _write_text(args.output, json.dumps(result, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_estimate(args) -> int:
    w, _ = _load_graph(args)
    res = estimate(w, args.k_min, args.k_max, LaplacianKind(args.laplacian), seed=args.seed)
    result = {
        "chosen_k": res.chosen_k,
        "n_inlier_estimate": res.n_inlier_estimate,
        "outlier_index": res.outlier_index,
        "labels": res.partition.labels.tolist(),
        "outlier": outlier_labels(res).tolist(),
        "trace": [[k, _finite_or_none(f)] for k, f in res.trace],
        "k_min": res.k_min,
        "k_max": res.k_max,
        "laplacian": LaplacianKind(args.laplacian).value,
        "seed": args.seed,
    }
    if args.output:
        _write_text(args.output, json.dumps(result, sort_keys=True) + "\n")
    print(res.chosen_k)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig()
    if args.config:
        try:
            raw = json.loads(_read_text(args.config))
        except json.JSONDecodeError as exc:
            raise IdcError(f"{args.config}: invalid JSON ({exc})") from exc
        cfg = bench.config_from_dict(raw, cfg)
    overrides = {}
    if args.dims:
        overrides["dims"] = [int(d) for d in args.dims.split(",")]
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.methods:
        overrides["methods"] = args.methods.split(",")
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.laplacian:
        overrides["laplacian"] = args.laplacian
    if args.affinity:
        overrides["affinity"] = args.affinity
    if args.gamma is not None:
        overrides["gamma"] = args.gamma
    cfg = bench.config_from_dict(overrides, cfg)
    rows = bench.run_bench(cfg, jobs=args.jobs)
    _write_text(args.output, bench.to_csv(rows, timing=args.timing))
    return EXIT_OK


def metrics_report(truth, predicted, truth_flags=None, pred_flags=None) -> dict:
    truth, predicted = np.asarray(truth), np.asarray(predicted)
    if truth.shape != predicted.shape:
        raise IdcError(f"label files differ in length: {truth.size} vs {predicted.size}")
    inliers = truth[~truth_flags] if truth_flags is not None else truth
    n_true = max(1, int(np.unique(inliers).size))
    n_pred = int(np.unique(predicted).size)
    report = {
        "ari": adjusted_rand_index(truth, predicted),
        "ami": adjusted_mutual_info(truth, predicted),
        "outlier_f1": None,
        "n_true_inlier_clusters": n_true,
        "n_predicted_clusters": n_pred,
        "cluster_count_error": {
            "idc": cluster_count_error(n_true, n_pred, "idc"),
            "plain": cluster_count_error(n_true, n_pred, "plain"),
        },
    }
    if truth_flags is not None and pred_flags is not None:
        report["outlier_f1"] = outlier_f1(truth_flags, pred_flags)
    return report


def cmd_metrics(args) -> int:
    truth, tflags = read_labels(args.truth)
    pred, pflags = read_labels(args.predicted)
    report = metrics_report(truth, pred, tflags, pflags)
    _write_text(args.output, _json_line(report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="idclust", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_flags(p):
        p.add_argument("--input", required=True, help="dataset CSV, or affinity CSV with --precomputed")
        p.add_argument("--precomputed", action="store_true", help="input is a headerless affinity matrix CSV")
        p.add_argument("--affinity", choices=("cosine", "gaussian"), default="cosine")
        p.add_argument("--gamma", type=float, default=1.0, help="gaussian kernel width")
        p.add_argument("--squared", action="store_true", help="square the distance in the gaussian kernel")
        p.add_argument("--laplacian", choices=("unnorm", "sym"), default="sym")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", help="output path (default: stdout)")

    p = sub.add_parser("gen", help="generate a synthetic dataset from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("affinity", help="write the affinity matrix of a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--affinity", choices=("cosine", "gaussian"), default="cosine")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--squared", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_affinity)

    p = sub.add_parser("cluster", help="spectral clustering with a fixed K")
    graph_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("estimate", help="estimate K and the outlier cluster")
    graph_flags(p)
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=10)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="dimension sweep on synthetic data, CSV output")
    p.add_argument("--config", help="JSON bench config (grids, generator settings)")
    p.add_argument("--dims", help="comma-separated dimensions, e.g. 64,256,512")
    p.add_argument("--trials", type=int)
    p.add_argument("--methods", help=f"comma-separated subset of {','.join(bench.METHODS)}")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--laplacian", choices=("unnorm", "sym"))
    p.add_argument("--affinity", choices=("cosine", "gaussian"))
    p.add_argument("--gamma", type=float)
    p.add_argument("--timing", action="store_true", help="add a wall_time_s column (output no longer reproducible)")
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("metrics", help="compare two label files")
    p.add_argument("--truth", required=True)
    p.add_argument("--predicted", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    level = getattr(logging, os.environ.get("IDC_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliIOError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except AllDegenerateError as exc:
        log.error("%s", exc)
        return EXIT_DEGENERATE
    except IdcError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
