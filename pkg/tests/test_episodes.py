"""Episode sampling, method evaluation, defaults, and the depth sweep."""

import numpy as np
import pytest

from kprop.episodes import (
    DEFAULT_SWEEP_GRID,
    MethodConfig,
    aggregate,
    evaluate_method,
    evaluate_task,
    sample_task,
    sample_tasks,
    sweep_extra_labels,
)
from kprop.errors import ConfigError, EmptyInputError, SamplingError, ShapeMismatchError


def toy_dataset(rng, classes=6, per_class=20, dim=4, spread=0.4):
    centers = rng.normal(size=(classes, dim)) * 5
    feats = np.vstack([c + rng.normal(size=(per_class, dim)) * spread for c in centers])
    labels = np.repeat(np.arange(classes), per_class)
    return feats, labels


def test_sample_task_partitions_are_disjoint():
    rng = np.random.default_rng(91)
    feats, labels = toy_dataset(rng)
    task = sample_task(feats, labels, way=3, shot=2, queries_per_class=5, seed=4, task_index=7)
    sup = set(task.support_indices.ravel().tolist())
    qry = set(task.query_indices.ravel().tolist())
    pool = set(task.pool_indices.tolist())
    assert not (sup & qry) and not (sup & pool) and not (qry & pool)
    assert len(sup | qry | pool) == feats.shape[0]
    assert task.seed_provenance == (4, 7)


def test_sample_task_indices_carry_their_class():
    rng = np.random.default_rng(92)
    feats, labels = toy_dataset(rng)
    task = sample_task(feats, labels, way=4, shot=1, queries_per_class=6, seed=0)
    for pos, cls in enumerate(task.class_ids):
        assert np.all(labels[task.support_indices[pos]] == cls)
        assert np.all(labels[task.query_indices[pos]] == cls)


def test_pool_spans_out_of_episode_classes():
    rng = np.random.default_rng(93)
    feats, labels = toy_dataset(rng, classes=6)
    task = sample_task(feats, labels, way=3, shot=1, queries_per_class=5, seed=2)
    pool_labels = set(labels[task.pool_indices].tolist())
    outside = set(range(6)) - set(task.class_ids.tolist())
    assert outside.issubset(pool_labels)


def test_sample_task_deterministic_in_seed_and_index():
    rng = np.random.default_rng(94)
    feats, labels = toy_dataset(rng)
    a = sample_task(feats, labels, 3, 1, 5, seed=8, task_index=2)
    b = sample_task(feats, labels, 3, 1, 5, seed=8, task_index=2)
    c = sample_task(feats, labels, 3, 1, 5, seed=8, task_index=3)
    assert np.array_equal(a.support_indices, b.support_indices)
    assert np.array_equal(a.query_indices, b.query_indices)
    assert not np.array_equal(a.support_indices, c.support_indices)


def test_sample_task_validation():
    rng = np.random.default_rng(95)
    feats, labels = toy_dataset(rng, classes=3, per_class=5)
    with pytest.raises(SamplingError):
        sample_task(feats, labels, way=4, shot=1, queries_per_class=2, seed=0)
    with pytest.raises(SamplingError):
        sample_task(feats, labels, way=2, shot=3, queries_per_class=4, seed=0)
    with pytest.raises(ShapeMismatchError):
        sample_task(feats, labels[:-1], way=2, shot=1, queries_per_class=2, seed=0)


def test_two_class_dataset_forces_both_classes():
    rng = np.random.default_rng(104)
    feats, labels = toy_dataset(rng, classes=2, per_class=10)
    for i in range(10):
        task = sample_task(feats, labels, 2, 1, 3, seed=6, task_index=i)
        assert set(task.class_ids.tolist()) == {0, 1}


def test_every_class_appears_across_many_draws():
    rng = np.random.default_rng(105)
    feats, labels = toy_dataset(rng, classes=10, per_class=8)
    seen = set()
    for i in range(100):
        task = sample_task(feats, labels, 5, 1, 2, seed=3, task_index=i)
        seen.update(task.class_ids.tolist())
    assert seen == set(range(10))


def test_memorized_queries_score_perfectly():
    # hand-built task whose queries duplicate the supports
    rng = np.random.default_rng(106)
    feats, labels = toy_dataset(rng, classes=3, per_class=6)
    task = sample_task(feats, labels, 3, 2, 2, seed=9)
    from dataclasses import replace as dc_replace

    memorized = dc_replace(task, query_indices=task.support_indices)
    for method in ("kprop", "prototype", "subspace", "linear", "prop-linear"):
        assert evaluate_task(feats, memorized, MethodConfig(method=method)) == 1.0


def test_aggregate_population_se():
    mean, se = aggregate([0.0, 1.0])
    assert mean == 0.5
    assert abs(se - 0.35355339059327373) < 1e-12
    mean, se = aggregate([0.7])
    assert (mean, se) == (0.7, 0.0)
    mean, se = aggregate([1.0])
    assert (mean, se) == (1.0, 0.0)
    _, se = aggregate([0.25, 0.25, 0.25])
    assert se == 0.0
    with pytest.raises(EmptyInputError):
        aggregate([])


def test_hyperparameter_defaults_follow_shot_count():
    cfg = MethodConfig(method="kprop")
    assert (cfg.resolved_q(1), cfg.resolved_extra(1)) == (1, 4)
    assert (cfg.resolved_q(2), cfg.resolved_extra(2)) == (2, 3)
    assert (cfg.resolved_q(5), cfg.resolved_extra(5)) == (4, 2)
    assert cfg.sigma == 16.0
    explicit = MethodConfig(method="kprop", q=3, extra_per_class=7)
    assert explicit.resolved_q(1) == 3
    assert explicit.resolved_extra(1) == 7


def test_method_name_validated():
    with pytest.raises(ConfigError):
        MethodConfig(method="svm")


def test_all_methods_beat_chance_on_separated_blobs():
    rng = np.random.default_rng(96)
    feats, labels = toy_dataset(rng, classes=5, per_class=15, spread=0.2)
    tasks = sample_tasks(feats, labels, 3, 2, 5, 11, 8)
    for method in ("kprop", "prototype", "subspace", "linear", "prop-linear"):
        report = evaluate_method(MethodConfig(method=method), tasks, feats)
        assert report.mean > 0.8, method
        assert report.task_count == 8
        assert len(report.per_task_accuracies) == 8


def test_worker_count_does_not_change_results():
    rng = np.random.default_rng(97)
    feats, labels = toy_dataset(rng, classes=4, per_class=12)
    tasks = sample_tasks(feats, labels, 3, 1, 4, 5, 6)
    cfg = MethodConfig(method="kprop")
    serial = evaluate_method(cfg, tasks, feats, workers=1)
    threaded = evaluate_method(cfg, tasks, feats, workers=4)
    assert serial.per_task_accuracies == threaded.per_task_accuracies
    assert serial.mean == threaded.mean and serial.se == threaded.se


def test_report_config_snapshot_is_rerunnable():
    rng = np.random.default_rng(98)
    feats, labels = toy_dataset(rng, classes=4, per_class=10)
    tasks = sample_tasks(feats, labels, 3, 1, 3, 5, 4)
    report = evaluate_method(
        MethodConfig(method="kprop"), tasks, feats, config_extra={"seed": 5}
    )
    cfg = report.config
    for key in (
        "method",
        "sigma",
        "q",
        "extra_per_class",
        "way",
        "shot",
        "queries_per_class",
        "task_count",
        "transductive",
        "normalize_features",
        "seed",
    ):
        assert key in cfg
    assert cfg["q"] == 1 and cfg["extra_per_class"] == 4  # resolved, not None


def test_argmin_equivalence_with_no_propagation():
    # kprop at k=1, M=0 degenerates to nearest-support classification
    rng = np.random.default_rng(99)
    feats, labels = toy_dataset(rng, classes=5, per_class=10, spread=1.5)
    tasks = sample_tasks(feats, labels, 4, 1, 5, 13, 5)
    cfg = MethodConfig(method="kprop", extra_per_class=0)
    for task in tasks:
        sup = feats[task.support_indices.ravel()]
        queries = feats[task.query_indices.ravel()]
        d2 = ((queries[:, None, :] - sup[None, :, :]) ** 2).sum(axis=2)
        nearest = d2.argmin(axis=1)
        truth = np.repeat(np.arange(task.way), task.queries_per_class)
        want = float(np.mean(nearest == truth))
        assert evaluate_task(feats, task, cfg) == want


def test_transductive_pool_includes_queries():
    # one stranded cluster reachable only through query points: transductive
    # propagation can bridge it, inductive cannot
    feats = np.array(
        [
            [0.0, 0.0],  # class 0 support
            [20.0, 0.0],  # class 1 support
            [0.5, 0.0],  # class 0 query
            [20.5, 0.0],  # class 1 query
            [1.0, 0.0],  # pool point near class 0 chain
            [19.9, 0.5],  # pool point near class 1
        ]
    )
    labels = np.array([0, 1, 0, 1, 0, 1])
    task = sample_task(feats, labels, 2, 1, 1, seed=0)
    cfg_t = MethodConfig(method="kprop", transductive=True, extra_per_class=2)
    cfg_i = MethodConfig(method="kprop", transductive=False, extra_per_class=2)
    # both run; the transductive config must not crash on the enlarged pool
    assert 0.0 <= evaluate_task(feats, task, cfg_t) <= 1.0
    assert 0.0 <= evaluate_task(feats, task, cfg_i) <= 1.0


def test_normalize_features_changes_geometry():
    rng = np.random.default_rng(100)
    feats, labels = toy_dataset(rng, classes=4, per_class=10)
    feats = feats + 10.0  # move off the unit sphere
    tasks = sample_tasks(feats, labels, 3, 1, 4, 21, 6)
    plain = evaluate_method(MethodConfig(method="prototype"), tasks, feats)
    normed = evaluate_method(
        MethodConfig(method="prototype", normalize_features=True), tasks, feats
    )
    assert plain.config["normalize_features"] is False
    assert normed.config["normalize_features"] is True


def test_sweep_shares_tasks_and_orders_points():
    rng = np.random.default_rng(101)
    feats, labels = toy_dataset(rng, classes=5, per_class=12)
    pts = sweep_extra_labels(feats, labels, 3, 1, [0, 2, 4], 6, seed=17, queries_per_class=5)
    assert [p.extra_per_class for p in pts] == [0, 2, 4]
    again = sweep_extra_labels(feats, labels, 3, 1, [0, 2, 4], 6, seed=17, queries_per_class=5)
    assert pts == again


def test_sweep_validation():
    rng = np.random.default_rng(102)
    feats, labels = toy_dataset(rng, classes=4, per_class=8)
    with pytest.raises(ConfigError):
        sweep_extra_labels(feats, labels, 2, 1, [-1, 0], 3, seed=0)
    with pytest.raises(ConfigError):
        sweep_extra_labels(
            feats, labels, 2, 1, [0], 3, seed=0, base=MethodConfig(method="prototype")
        )


def test_default_sweep_grid_shape():
    assert DEFAULT_SWEEP_GRID[:11] == tuple(range(11))
    assert DEFAULT_SWEEP_GRID[-1] == 100
    assert all(b > a for a, b in zip(DEFAULT_SWEEP_GRID, DEFAULT_SWEEP_GRID[1:]))


def test_evaluate_method_needs_tasks():
    rng = np.random.default_rng(103)
    feats, labels = toy_dataset(rng, classes=3, per_class=6)
    with pytest.raises(EmptyInputError):
        evaluate_method(MethodConfig(method="prototype"), [], feats)
