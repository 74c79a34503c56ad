"""Distance statistics and nearest-neighbor label purity."""

import numpy as np
import pytest

from kprop.errors import EmptyInputError, SamplingError, ShapeMismatchError
from kprop.geometry import (
    estimate_pnn,
    nn_same_class_fraction,
    pairwise_distance_stats,
)


def brute_force_pnn(features, labels):
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, None]
    n = features.shape[0]
    hits = 0
    for i in range(n):
        best = None
        for j in range(n):
            if j == i:
                continue
            d = float(np.linalg.norm(features[i] - features[j]))
            if best is None or d < best[0]:
                best = (d, j)  # strict < keeps the lowest index on ties
        hits += int(labels[best[1]] == labels[i])
    return hits / n


def test_distance_stats_match_brute_force():
    rng = np.random.default_rng(81)
    feats = rng.normal(size=(20, 3))
    labels = rng.integers(0, 3, size=20)
    while np.unique(labels).size < 2:
        labels = rng.integers(0, 3, size=20)
    stats = pairwise_distance_stats(feats, labels)
    intra, inter = [], []
    for i in range(20):
        for j in range(i + 1, 20):
            d = float(np.linalg.norm(feats[i] - feats[j]))
            (intra if labels[i] == labels[j] else inter).append(d)
    assert abs(stats.intra_mean - np.mean(intra)) < 1e-12
    assert abs(stats.intra_sd - np.std(intra)) < 1e-12
    assert abs(stats.inter_mean - np.mean(inter)) < 1e-12
    assert stats.intra_count == len(intra)
    assert stats.inter_count == len(inter)


def test_distance_stats_collinear_fixture():
    # {0, 1} share a class, {3} does not: one intra pair, two inter pairs
    stats = pairwise_distance_stats(np.array([0.0, 1.0, 3.0]), [0, 0, 1])
    assert stats.intra_mean == 1.0 and stats.intra_count == 1
    assert stats.inter_mean == 2.5 and stats.inter_count == 2


def test_distance_stats_two_point_fixture():
    stats = pairwise_distance_stats(np.array([[0.0, 0.0], [3.0, 4.0]]), [0, 1])
    assert stats.inter_mean == 5.0
    assert stats.intra_count == 0 and np.isnan(stats.intra_mean)


def test_duplicating_points_shrinks_intra_only():
    rng = np.random.default_rng(85)
    feats = rng.normal(size=(12, 3))
    labels = np.array([0] * 6 + [1] * 6)
    base = pairwise_distance_stats(feats, labels)
    doubled = pairwise_distance_stats(
        np.vstack([feats, feats]), np.concatenate([labels, labels])
    )
    assert doubled.intra_mean < base.intra_mean  # zero-distance twins enter
    assert abs(doubled.inter_mean - base.inter_mean) < 1e-12


def test_distance_stats_translation_and_scale():
    rng = np.random.default_rng(86)
    feats = rng.normal(size=(10, 4))
    labels = rng.integers(0, 2, size=10)
    while np.unique(labels).size < 2:
        labels = rng.integers(0, 2, size=10)
    base = pairwise_distance_stats(feats, labels)
    shifted = pairwise_distance_stats(feats + 7.5, labels)
    assert abs(base.intra_mean - shifted.intra_mean) < 1e-12
    assert abs(base.inter_mean - shifted.inter_mean) < 1e-12
    scaled = pairwise_distance_stats(feats * 3.0, labels)
    assert abs(scaled.intra_mean - 3.0 * base.intra_mean) < 1e-12
    assert abs(scaled.inter_sd - 3.0 * base.inter_sd) < 1e-12


def test_distance_stats_no_intra_pairs():
    feats = np.array([[0.0], [1.0], [2.0]])
    stats = pairwise_distance_stats(feats, [0, 1, 2])
    assert stats.intra_count == 0
    assert np.isnan(stats.intra_mean)
    assert stats.inter_count == 3


def test_distance_stats_validation():
    with pytest.raises(EmptyInputError):
        pairwise_distance_stats(np.ones((1, 2)), [0])
    with pytest.raises(EmptyInputError):
        pairwise_distance_stats(np.ones((4, 2)), [1, 1, 1, 1])  # single label
    with pytest.raises(ShapeMismatchError):
        pairwise_distance_stats(np.ones((4, 2)), [0, 1])


def test_nn_fraction_matches_brute_force():
    rng = np.random.default_rng(82)
    for _ in range(20):
        n = int(rng.integers(4, 30))
        feats = rng.normal(size=(n, int(rng.integers(1, 4))))
        labels = rng.integers(0, 3, size=n)
        assert nn_same_class_fraction(feats, labels) == brute_force_pnn(feats, labels)


def test_one_dimensional_purity_fixture():
    # {0,1} vs {5,10}: only point 5 has a cross-class neighbor -> purity 3/4
    feats = np.array([0.0, 1.0, 5.0, 10.0])
    labels = np.array([0, 0, 1, 1])
    assert nn_same_class_fraction(feats, labels) == 0.75
    est = estimate_pnn(feats, labels, classes_per_trial=2, trials=10, seed=3)
    assert est.mean == 0.75
    assert est.sd == 0.0


def test_estimate_pnn_subsets_match_brute_force():
    rng = np.random.default_rng(83)
    feats = rng.normal(size=(40, 3))
    labels = rng.integers(0, 5, size=40)
    est = estimate_pnn(feats, labels, classes_per_trial=2, trials=30, seed=9)
    # recompute each trial with the documented stream (seed, trial)
    uniq = np.unique(labels)
    vals = []
    for t in range(30):
        trial_rng = np.random.default_rng((9, t))
        chosen = trial_rng.choice(uniq, size=2, replace=False)
        mask = np.isin(labels, chosen)
        vals.append(brute_force_pnn(feats[mask], labels[mask]))
    assert abs(est.mean - np.mean(vals)) < 1e-12
    assert abs(est.sd - np.std(vals)) < 1e-12
    assert est.trials == 30 and est.classes_per_trial == 2


def test_estimate_pnn_full_class_count_is_deterministic():
    rng = np.random.default_rng(84)
    feats = rng.normal(size=(30, 2))
    labels = rng.integers(0, 3, size=30)
    a = estimate_pnn(feats, labels, classes_per_trial=3, trials=5, seed=1)
    b = estimate_pnn(feats, labels, classes_per_trial=3, trials=5, seed=1)
    assert a == b
    assert a.mean == nn_same_class_fraction(feats, labels)


def test_estimate_pnn_validation():
    feats = np.ones((6, 2))
    labels = [0, 0, 1, 1, 2, 2]
    with pytest.raises(SamplingError):
        estimate_pnn(feats, labels, classes_per_trial=4, trials=5, seed=0)
    with pytest.raises(SamplingError):
        estimate_pnn(feats, labels, classes_per_trial=0, trials=5, seed=0)
    with pytest.raises(SamplingError):
        estimate_pnn(feats, labels, classes_per_trial=2, trials=0, seed=0)
