import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idclust.affinity import (
    AffinityKind,
    IdOutOfRangeError,
    MissingPairError,
    NonPositiveGammaError,
    ZeroNormRowError,
    cosine_affinity,
    cosine_similarity,
    gaussian_affinity,
    tracklet_median_affinity,
)
from idclust.core import validate_affinity


def test_cosine_identical_orthogonal_opposite():
    x = np.array([[1.0, 2.0], [1.0, 2.0], [-2.0, 1.0], [-1.0, -2.0]])
    w = cosine_affinity(x).weights
    assert w[0, 1] == pytest.approx(2.0)
    assert w[0, 2] == pytest.approx(1.0)
    assert w[0, 3] == pytest.approx(0.0, abs=1e-15)
    assert np.all(np.diag(w) == 0)


def test_cosine_zero_row():
    with pytest.raises(ZeroNormRowError) as info:
        cosine_affinity([[1.0, 0.0], [0.0, 0.0]])
    assert info.value.row == 1


def test_cosine_similarity_is_unshifted():
    x = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    s = cosine_similarity(x)
    assert s[0, 1] == pytest.approx(0.0)
    assert s[0, 2] == pytest.approx(-1.0)


def test_gaussian_examples():
    x = np.array([[0.0, 0.0], [0.0, 0.0], [2.0, 0.0]])
    w = gaussian_affinity(x, gamma=1.0).weights
    assert w[0, 1] == pytest.approx(1.0)
    assert w[0, 2] == pytest.approx(math.exp(-1.0))
    assert w[0, 2] == pytest.approx(0.367879, abs=1e-6)


def test_gaussian_squared_flag():
    x = np.array([[0.0], [2.0]])
    assert gaussian_affinity(x, 1.0, squared=True).weights[0, 1] == pytest.approx(math.exp(-2.0))


def test_gaussian_large_gamma_tends_to_one():
    x = np.array([[0.0, 0.0], [3.0, 4.0]])
    vals = [gaussian_affinity(x, g).weights[0, 1] for g in (0.5, 1, 2, 10, 100, 1e4)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("gamma", [0.0, -1.0])
def test_gaussian_gamma_must_be_positive(gamma):
    with pytest.raises(NonPositiveGammaError):
        gaussian_affinity([[0.0], [1.0]], gamma)
    with pytest.raises(NonPositiveGammaError):
        AffinityKind("gaussian", gamma)


finite = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=50)
@given(st.integers(0, 2**31 - 1), st.floats(0.01, 100))
def test_cosine_scale_invariance(seed, c):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(6, 4))
    y = x.copy()
    y[rng.integers(6)] *= c
    np.testing.assert_allclose(cosine_affinity(x).weights, cosine_affinity(y).weights, atol=1e-12)


@settings(max_examples=50)
@given(st.integers(0, 2**31 - 1), st.lists(finite, min_size=3, max_size=3))
def test_gaussian_translation_invariance(seed, shift):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(6, 3))
    a = gaussian_affinity(x, 1.0).weights
    b = gaussian_affinity(x + np.array(shift), 1.0).weights
    np.testing.assert_allclose(a, b, atol=1e-12)


@settings(max_examples=30)
@given(st.integers(0, 2**31 - 1))
def test_outputs_are_valid_affinities(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(7, 5))
    for w in (cosine_affinity(x), gaussian_affinity(x, 0.7)):
        again = validate_affinity(w.weights)
        np.testing.assert_array_equal(again.weights, w.weights)
        assert w.weights.max() <= 2.0


@pytest.mark.parametrize(
    "values, expected",
    [([0.1, 0.9, 0.5], 0.5), ([0.2, 0.4], 0.3), ([0.7], 0.7)],
)
def test_tracklet_median(values, expected):
    triples = [(0, 1, v) for v in values]
    w = tracklet_median_affinity(triples, 2)
    assert w.weights[0, 1] == pytest.approx(expected)
    assert w.weights[1, 0] == pytest.approx(expected)


def test_tracklet_pair_order_ignored():
    w = tracklet_median_affinity([(0, 1, 0.2), (1, 0, 0.4), (0, 2, 1.0), (2, 1, 0.5)], 3)
    assert w.weights[0, 1] == pytest.approx(0.3)
    assert w.weights[1, 2] == pytest.approx(0.5)


def test_tracklet_errors():
    with pytest.raises(MissingPairError):
        tracklet_median_affinity([(0, 1, 0.5)], 3)
    with pytest.raises(IdOutOfRangeError):
        tracklet_median_affinity([(0, 5, 0.5)], 2)
