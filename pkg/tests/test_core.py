import numpy as np
import pytest
from hypothesis import given, strategies as st

from idclust.core import (
    AsymmetricError,
    EmptyClusterError,
    InvalidDatasetError,
    InvalidPartitionError,
    NegativeWeightError,
    NonFiniteError,
    NonSquareError,
    make_dataset,
    make_partition,
    relabel,
    validate_affinity,
)


def test_valid_two_by_two():
    w = validate_affinity([[0, 1], [1, 0]])
    assert w.size == 2
    np.testing.assert_array_equal(w.weights, [[0, 1], [1, 0]])


def test_diagonal_is_zeroed():
    w = validate_affinity([[5, 1], [1, 0]])
    np.testing.assert_array_equal(w.weights, [[0, 1], [1, 0]])


def test_asymmetric_rejected():
    with pytest.raises(AsymmetricError):
        validate_affinity([[0, 1], [2, 0]])


def test_tiny_asymmetry_is_averaged():
    w = validate_affinity([[0, 1.0], [1.0 + 5e-10, 0]])
    assert w.weights[0, 1] == w.weights[1, 0]


@pytest.mark.parametrize(
    "raw, err",
    [
        ([[0, 1, 2], [1, 0, 3]], NonSquareError),
        ([[0, -1], [-1, 0]], NegativeWeightError),
        ([[0, np.nan], [np.nan, 0]], NonFiniteError),
        ([[0, np.inf], [np.inf, 0]], NonFiniteError),
    ],
)
def test_rejections(raw, err):
    with pytest.raises(err):
        validate_affinity(raw)


def test_weights_are_read_only():
    w = validate_affinity([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        w.weights[0, 1] = 3.0


@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_round_trip_on_valid_matrix(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 3, (n, n))
    a = a + a.T
    np.fill_diagonal(a, 0)
    w = validate_affinity(a)
    np.testing.assert_array_equal(validate_affinity(w.weights).weights, w.weights)
    np.testing.assert_array_equal(w.weights, a)


def test_partition_rejects_label_at_k():
    with pytest.raises(InvalidPartitionError):
        make_partition([0, 1, 2], k=2)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=30))
def test_partition_accepts_surjective(labels):
    dense = relabel(labels)
    p = make_partition(dense.labels, dense.k, require_nonempty=True)
    assert p.k == len(set(labels))
    assert np.all(p.sizes() > 0)


def test_partition_empty_cluster_detected():
    with pytest.raises(EmptyClusterError) as info:
        make_partition([0, 0, 2], k=3, require_nonempty=True)
    assert info.value.cluster == 1


def test_relabel_first_appearance():
    assert relabel([7, 7, 3, 9, 3]).labels.tolist() == [0, 0, 1, 2, 1]


def test_dataset_validation():
    ds = make_dataset(np.zeros((3, 2)), [0, 1, 2], 2)
    assert ds.dim == 2 and ds.size == 3
    assert ds.is_outlier.tolist() == [True, False, False]
    with pytest.raises(InvalidDatasetError):
        make_dataset(np.zeros((3, 2)), [0, 1, 3], 2)
    with pytest.raises(InvalidDatasetError):
        make_dataset([[0.0, np.nan]], [0])
    with pytest.raises(InvalidDatasetError):
        make_dataset(np.zeros((3, 2)), [0, 1])
