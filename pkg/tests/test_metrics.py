import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idclust.core import IdcError
from idclust.metrics import (
    LengthMismatchError,
    adjusted_mutual_info,
    adjusted_rand_index,
    cluster_count_error,
    contingency,
    expected_mutual_info,
    mutual_info,
    outlier_f1,
)
from oracles import ami_direct, ari_pairs, emi_direct, emi_monte_carlo, mi_direct, same_partition

SMALL_T, SMALL_P = (0, 0, 0, 1, 1, 1), (0, 0, 1, 1, 2, 2)
SMALL_AMI = 0.29879245817089006
SMALL_EMI = 0.2772588722239781


def test_ari_examples():
    assert adjusted_rand_index([0, 1, 1, 2], [0, 1, 1, 2]) == 1.0
    assert adjusted_rand_index([0, 1, 1, 2], [5, 3, 3, 9]) == 1.0
    assert adjusted_rand_index((0, 0, 1, 1), (0, 1, 0, 1)) == pytest.approx(-0.5, abs=1e-12)
    assert ari_pairs((0, 0, 1, 1), (0, 1, 0, 1)) == pytest.approx(-0.5, abs=1e-12)
    assert adjusted_rand_index([1, 1, 1], [2, 2, 2]) == 1.0


def test_ami_examples():
    assert adjusted_mutual_info([0, 0, 1, 1, 2], [1, 1, 0, 0, 2]) == pytest.approx(1.0)
    assert adjusted_mutual_info([0, 0, 1, 1, 2, 2], [0] * 6) == 0.0
    assert adjusted_mutual_info(SMALL_T, SMALL_P) == pytest.approx(SMALL_AMI, abs=1e-12)


def test_small_emi_three_ways():
    table = contingency(SMALL_T, SMALL_P)
    emi = expected_mutual_info(table.sum(axis=1), table.sum(axis=0), 6)
    assert emi == pytest.approx(SMALL_EMI, abs=1e-12)
    assert emi_direct(SMALL_T, SMALL_P) == pytest.approx(SMALL_EMI, abs=1e-12)
    mean, se = emi_monte_carlo(SMALL_T, SMALL_P, 20000, seed=0)
    assert abs(mean - SMALL_EMI) <= 3 * se


def test_sklearn_agrees_if_available():
    skm = pytest.importorskip("sklearn.metrics")
    rng = np.random.default_rng(1)
    for _ in range(20):
        t, p = rng.integers(0, 4, 30), rng.integers(0, 5, 30)
        assert adjusted_mutual_info(t, p) == pytest.approx(skm.adjusted_mutual_info_score(t, p), abs=1e-10)
        assert adjusted_rand_index(t, p) == pytest.approx(skm.adjusted_rand_score(t, p), abs=1e-10)


labels_pair = st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 4), min_size=n, max_size=n), st.lists(st.integers(0, 4), min_size=n, max_size=n))
)


@settings(max_examples=200, deadline=None)
@given(labels_pair)
def test_against_oracles(pair):
    t, p = pair
    assert abs(adjusted_rand_index(t, p) - ari_pairs(t, p)) <= 1e-10
    assert abs(adjusted_mutual_info(t, p) - ami_direct(t, p)) <= 1e-10
    assert abs(mutual_info(contingency(t, p)) - mi_direct(t, p)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(labels_pair, st.permutations(range(5)))
def test_permutation_invariance_and_bounds(pair, perm):
    t, p = (np.asarray(x) for x in pair)
    renamed = np.asarray(perm)[p]
    assert adjusted_rand_index(t, renamed) == pytest.approx(adjusted_rand_index(t, p), abs=1e-12)
    assert adjusted_mutual_info(renamed, t) == pytest.approx(adjusted_mutual_info(p, t), abs=1e-12)
    ari, ami = adjusted_rand_index(t, p), adjusted_mutual_info(t, p)
    assert ari <= 1 + 1e-12 and ami <= 1 + 1e-12
    nontrivial = len(set(t.tolist())) > 1 or len(set(p.tolist())) > 1
    if nontrivial and not same_partition(t, p):
        assert ari < 1 - 1e-12


def test_length_mismatch():
    with pytest.raises(LengthMismatchError):
        adjusted_rand_index([0, 1], [0, 1, 1])
    with pytest.raises(LengthMismatchError):
        adjusted_mutual_info([0], [0])
    with pytest.raises(LengthMismatchError):
        outlier_f1([True], [True, False])


def test_f1_examples():
    assert outlier_f1([1, 0, 1], [1, 0, 1]) == 1.0
    assert outlier_f1([1, 0, 1], [0, 0, 0]) == 0.0
    truth = np.r_[np.ones(10, bool), np.zeros(5, bool)]
    assert outlier_f1(truth, np.ones(15, bool)) == pytest.approx(0.8)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=0, max_size=30))
def test_f1_range(pairs):
    t = [a for a, _ in pairs]
    p = [b for _, b in pairs]
    assert 0.0 <= outlier_f1(t, p) <= 1.0


def test_cluster_count_error():
    assert cluster_count_error(5, 6, "idc") == 0
    assert cluster_count_error(5, 6, "plain") == 1
    assert cluster_count_error(3, 8, "plain") == cluster_count_error(8, 3, "plain")
    with pytest.raises(IdcError):
        cluster_count_error(0, 3)
    with pytest.raises(IdcError):
        cluster_count_error(2, 3, "other")
