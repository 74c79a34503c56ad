"""Episodic N-way k-shot evaluation.

A task is one sampled episode: N classes, k labeled supports per class, a
held-out query set, and everything else as an unlabeled pool. Methods are
scored by mean accuracy over many tasks with a standard error, and a sweep
helper re-runs the pipeline over a grid of propagation depths on a shared
task set so the resulting curve is comparable point to point.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .classifiers import (
    kprop_scores,
    linear_scores,
    prototype_scores,
    subspace_scores,
    train_linear,
)
from .errors import ConfigError, EmptyInputError, SamplingError, ShapeMismatchError
from .kernels import KernelConfig
from .kpca import fit_kpca
from .propagation import LabeledSets, propagate_labels

METHODS = ("kprop", "prototype", "subspace", "linear", "prop-linear")

#: Propagation-depth grid for the accuracy-vs-depth sweep: every depth up to
#: 10, then strides of 5.
DEFAULT_SWEEP_GRID = tuple(range(0, 11)) + tuple(range(15, 101, 5))


@dataclass(frozen=True)
class FewShotTask:
    way: int
    shot: int
    queries_per_class: int
    class_ids: np.ndarray
    support_indices: np.ndarray  # (way, shot) into the dataset
    query_indices: np.ndarray  # (way, queries_per_class)
    pool_indices: np.ndarray
    seed_provenance: tuple


@dataclass(frozen=True)
class MethodConfig:
    """Method id plus hyperparameters; None means resolve from the shot count."""

    method: str
    sigma: float = 16.0
    q: Optional[int] = None
    extra_per_class: Optional[int] = None
    transductive: bool = False
    normalize_features: bool = False
    subspace_dim: Optional[int] = None
    eigvec_source: str = "centered"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}, expected one of {METHODS}")

    def resolved_q(self, shot: int) -> int:
        return self.q if self.q is not None else (2 * shot) // 3 + 1

    def resolved_extra(self, shot: int) -> int:
        if self.extra_per_class is not None:
            return self.extra_per_class
        if shot == 1:
            return 4
        if shot == 2:
            return 3
        return 2


@dataclass(frozen=True)
class EvalReport:
    method: str
    per_task_accuracies: tuple
    mean: float
    se: float
    task_count: int
    config: dict


class SweepPoint(NamedTuple):
    extra_per_class: int
    mean: float
    se: float


def aggregate(accuracies) -> tuple:
    """Mean and standard error (population SD over sqrt of count)."""
    vals = np.asarray(list(accuracies), dtype=float)
    if vals.size == 0:
        raise EmptyInputError("cannot aggregate zero accuracies")
    return float(vals.mean()), float(vals.std() / np.sqrt(vals.size))


def sample_task(
    features,
    labels,
    way: int,
    shot: int,
    queries_per_class: int,
    seed: int,
    task_index: int = 0,
) -> FewShotTask:
    """Sample one episode with the RNG stream derived from (seed, task_index).

    Classes are drawn uniformly without replacement; supports and queries are
    disjoint uniform draws within each class. The pool is every remaining
    point of the whole dataset, including points of classes outside the
    episode.
    """
    features = np.atleast_2d(np.asarray(features, dtype=float))
    labels = np.asarray(labels)
    if labels.shape[0] != features.shape[0]:
        raise ShapeMismatchError(
            f"labels count {labels.shape[0]} does not match {features.shape[0]} feature rows"
        )
    uniq = np.unique(labels)
    if uniq.size < way:
        raise SamplingError(f"dataset has {uniq.size} classes, need {way}")
    need = shot + queries_per_class
    rng = np.random.default_rng((seed, task_index))
    class_ids = np.sort(rng.choice(uniq, size=way, replace=False))

    support = np.empty((way, shot), dtype=int)
    query = np.empty((way, queries_per_class), dtype=int)
    for pos, cls in enumerate(class_ids):
        members = np.nonzero(labels == cls)[0]
        if members.size < need:
            raise SamplingError(
                f"class {cls} has {members.size} points, need {need} (shot + queries)"
            )
        perm = rng.permutation(members)
        support[pos] = perm[:shot]
        query[pos] = perm[shot : shot + queries_per_class]

    taken = np.zeros(features.shape[0], dtype=bool)
    taken[support.ravel()] = True
    taken[query.ravel()] = True
    pool = np.nonzero(~taken)[0]
    return FewShotTask(
        way=way,
        shot=shot,
        queries_per_class=queries_per_class,
        class_ids=class_ids,
        support_indices=support,
        query_indices=query,
        pool_indices=pool,
        seed_provenance=(seed, task_index),
    )


def _l2_normalize(features: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.einsum("ij,ij->i", features, features))
    safe = np.where(norms > 0, norms, 1.0)
    return features / safe[:, None]


def _expanded_supports(features, task: FewShotTask, cfg: MethodConfig):
    """Per-class support features, after propagation when the method uses it."""
    sets = LabeledSets.from_lists([row.tolist() for row in task.support_indices])
    if cfg.method in ("kprop", "prop-linear"):
        extra = cfg.resolved_extra(task.shot)
        pool = task.pool_indices
        if cfg.transductive:
            pool = np.concatenate([pool, task.query_indices.ravel()])
        if extra > 0 and pool.size > 0:
            sets = propagate_labels(features, sets, pool, extra).expanded
    return [features[list(idx)] for idx in sets.indices]


def evaluate_task(features, task: FewShotTask, cfg: MethodConfig) -> float:
    """Accuracy of one method on one episode."""
    supports = _expanded_supports(features, task, cfg)
    queries = features[task.query_indices.ravel()]
    if cfg.method == "kprop":
        kcfg = KernelConfig(sigma=cfg.sigma)
        q = cfg.resolved_q(task.shot)
        models = [fit_kpca(pts, kcfg, q, eigvec_source=cfg.eigvec_source) for pts in supports]
        scores = kprop_scores(models, queries)
        preds = scores.argmin(axis=1)
    elif cfg.method == "prototype":
        preds = prototype_scores(supports, queries).argmin(axis=1)
    elif cfg.method == "subspace":
        preds = subspace_scores(supports, queries, dim=cfg.subspace_dim).argmin(axis=1)
    else:  # linear, prop-linear
        preds = linear_scores(train_linear(supports), queries).argmax(axis=1)
    truth = np.repeat(np.arange(task.way), task.queries_per_class)
    return float(np.mean(preds == truth))


def evaluate_method(
    cfg: MethodConfig,
    tasks,
    features,
    labels=None,
    workers: int = 1,
    config_extra: Optional[dict] = None,
) -> EvalReport:
    """Run one method over a task list and aggregate mean and SE.

    Tasks are evaluated independently (optionally across threads) and the
    accuracies reduced in task order, so the report does not depend on the
    worker count. ``labels`` is accepted for signature symmetry but episode
    truth comes from each task's own index bookkeeping.
    """
    tasks = list(tasks)
    if not tasks:
        raise EmptyInputError("no tasks to evaluate")
    features = np.atleast_2d(np.asarray(features, dtype=float))
    if cfg.normalize_features:
        features = _l2_normalize(features)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(lambda t: evaluate_task(features, t, cfg), tasks))
    else:
        accs = [evaluate_task(features, t, cfg) for t in tasks]

    mean, se = aggregate(accs)
    shot = tasks[0].shot
    snapshot = {
        "method": cfg.method,
        "sigma": cfg.sigma,
        "q": cfg.resolved_q(shot),
        "extra_per_class": cfg.resolved_extra(shot),
        "way": tasks[0].way,
        "shot": shot,
        "queries_per_class": tasks[0].queries_per_class,
        "task_count": len(tasks),
        "transductive": cfg.transductive,
        "normalize_features": cfg.normalize_features,
        "subspace_dim": cfg.subspace_dim,
        "eigvec_source": cfg.eigvec_source,
    }
    if config_extra:
        snapshot.update(config_extra)
    return EvalReport(
        method=cfg.method,
        per_task_accuracies=tuple(accs),
        mean=mean,
        se=se,
        task_count=len(tasks),
        config=snapshot,
    )


def sample_tasks(features, labels, way, shot, queries_per_class, seed, count) -> list:
    return [
        sample_task(features, labels, way, shot, queries_per_class, seed, i)
        for i in range(count)
    ]


def sweep_extra_labels(
    features,
    labels,
    way: int,
    shot: int,
    m_values,
    tasks_per_point: int,
    seed: int,
    queries_per_class: int = 15,
    base: Optional[MethodConfig] = None,
    workers: int = 1,
) -> list:
    """Accuracy of the propagation+KPCA method at each propagation depth.

    All depths share one task set sampled up front, so differences along the
    curve reflect the depth alone.
    """
    m_values = [int(m) for m in m_values]
    if any(m < 0 for m in m_values):
        raise ConfigError("propagation depths must be >= 0")
    base = base if base is not None else MethodConfig(method="kprop")
    if base.method != "kprop":
        raise ConfigError(f"sweep runs the kprop method, got {base.method!r}")
    tasks = sample_tasks(features, labels, way, shot, queries_per_class, seed, tasks_per_point)
    points = []
    for m in m_values:
        report = evaluate_method(
            replace(base, extra_per_class=m), tasks, features, workers=workers
        )
        points.append(SweepPoint(extra_per_class=m, mean=report.mean, se=report.se))
    return points
