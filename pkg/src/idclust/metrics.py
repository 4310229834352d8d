"""External validity indices: ARI, AMI, outlier F1 and cluster-count error."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from .core import IdcError


class LengthMismatchError(IdcError):
    pass


def _check(truth, predicted, min_len: int = 2):
    t, p = np.asarray(truth).ravel(), np.asarray(predicted).ravel()
    if t.shape != p.shape:
        raise LengthMismatchError(f"label arrays differ in length: {t.size} vs {p.size}")
    if t.size < min_len:
        raise LengthMismatchError(f"need at least {min_len} labels, got {t.size}")
    return t, p


def contingency(truth, predicted) -> np.ndarray:
    _, ti = np.unique(truth, return_inverse=True)
    _, pi = np.unique(predicted, return_inverse=True)
    table = np.zeros((ti.max() + 1, pi.max() + 1), dtype=np.int64)
    np.add.at(table, (ti.ravel(), pi.ravel()), 1)
    return table


def _pairs(x):
    x = np.asarray(x, dtype=float)
    return x * (x - 1.0) / 2.0


def adjusted_rand_index(truth, predicted) -> float:
    t, p = _check(truth, predicted)
    table = contingency(t, p)
    index = _pairs(table).sum()
    a = _pairs(table.sum(axis=1)).sum()
    b = _pairs(table.sum(axis=0)).sum()
    expected = a * b / _pairs(t.size)
    max_index = (a + b) / 2.0
    if max_index == expected:
        # only when both labelings are trivial in the same way, hence identical
        return 1.0
    return float((index - expected) / (max_index - expected))


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def mutual_info(table: np.ndarray) -> float:
    n = table.sum()
    a = table.sum(axis=1, keepdims=True)
    b = table.sum(axis=0, keepdims=True)
    nz = table > 0
    nij = table[nz].astype(float)
    outer = (a * b)[nz].astype(float)
    return float((nij / n * (np.log(nij) + np.log(n) - np.log(outer))).sum())


def expected_mutual_info(a, b, n: int) -> float:
    """Exact E[MI] under the hypergeometric model for fixed marginals ``a``, ``b``.

    Clusters with equal sizes contribute equal terms, so the double sum runs
    over distinct sizes weighted by their multiplicities.
    """
    ua, ca = np.unique(np.asarray(a, dtype=np.int64), return_counts=True)
    ub, cb = np.unique(np.asarray(b, dtype=np.int64), return_counts=True)
    lg_n = gammaln(n + 1)
    total = 0.0
    for ai, wa in zip(ua, ca):
        for bj, wb in zip(ub, cb):
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if lo > hi:
                continue
            nij = np.arange(lo, hi + 1, dtype=float)
            log_p = (
                gammaln(ai + 1) + gammaln(bj + 1) + gammaln(n - ai + 1) + gammaln(n - bj + 1)
                - lg_n - gammaln(nij + 1) - gammaln(ai - nij + 1) - gammaln(bj - nij + 1)
                - gammaln(n - ai - bj + nij + 1)
            )
            term = nij / n * (np.log(n) + np.log(nij) - np.log(float(ai) * float(bj)))
            total += wa * wb * float(np.sum(term * np.exp(log_p)))
    return total


def adjusted_mutual_info(truth, predicted) -> float:
    """AMI with arithmetic-mean entropy normalization and natural logs."""
    t, p = _check(truth, predicted)
    table = contingency(t, p)
    a, b = table.sum(axis=1), table.sum(axis=0)
    mi = mutual_info(table)
    emi = expected_mutual_info(a, b, t.size)
    h_mean = (_entropy(a) + _entropy(b)) / 2.0
    denom = h_mean - emi
    if abs(denom) <= 1e-12 * max(1.0, h_mean):
        identical = table.shape[0] == table.shape[1] and np.count_nonzero(table) == table.shape[0]
        return 1.0 if identical else 0.0
    return float((mi - emi) / denom)


def outlier_f1(truth_is_outlier, predicted_is_outlier) -> float:
    """F1 score with the outlier class as the positive class."""
    t, p = _check(truth_is_outlier, predicted_is_outlier, min_len=0)
    t, p = t.astype(bool), p.astype(bool)
    tp = np.count_nonzero(t & p)
    fp = np.count_nonzero(~t & p)
    fn = np.count_nonzero(t & ~p)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def cluster_count_error(true_k: int, estimated_k: int, mode: str = "idc") -> int:
    """``|K_hat - (N_in + 1)|`` in ``"idc"`` mode, ``|K_hat - K|`` in ``"plain"`` mode."""
    if true_k < 1 or estimated_k < 1:
        raise IdcError("cluster counts must be >= 1")
    if mode == "idc":
        return abs(estimated_k - (true_k + 1))
    if mode == "plain":
        return abs(estimated_k - true_k)
    raise IdcError(f"unknown mode {mode!r}")
