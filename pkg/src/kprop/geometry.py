"""Feature-space geometry measurements.

Two views of how tangled the classes are: pairwise-distance statistics split
into same-class and cross-class pairs, and the probability that a point's
nearest neighbor shares its class. Classes whose members sit on sparse
chains can have intra-class distances nearly as large as inter-class ones
while still keeping that nearest-neighbor probability high; measuring both
is what separates the two situations.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, SamplingError, ShapeMismatchError
from .kernels import pairwise_sq_dists


@dataclass(frozen=True)
class DistanceStats:
    intra_mean: float
    intra_sd: float
    intra_count: int
    inter_mean: float
    inter_sd: float
    inter_count: int


@dataclass(frozen=True)
class PnnEstimate:
    mean: float
    sd: float
    trials: int
    classes_per_trial: int


def _check_features_labels(features, labels):
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, None]
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
        raise ShapeMismatchError(
            f"labels shape {labels.shape} does not match {features.shape[0]} feature rows"
        )
    return features, labels


def pairwise_distance_stats(features, labels) -> DistanceStats:
    """Euclidean distance statistics over all unordered point pairs.

    Pairs are split by whether the two points share a label. Means and SDs
    (population convention) are reported per partition; an empty intra
    partition yields NaN statistics with count 0, while an empty inter
    partition is an error since it means there is only one class.
    """
    features, labels = _check_features_labels(features, labels)
    n = features.shape[0]
    if n < 2:
        raise EmptyInputError(f"need at least 2 points, got {n}")
    if np.unique(labels).size < 2:
        raise EmptyInputError("need at least 2 distinct labels for inter-class pairs")

    d = np.sqrt(np.maximum(pairwise_sq_dists(features, features), 0.0))
    iu, ju = np.triu_indices(n, k=1)
    same = labels[iu] == labels[ju]
    intra = d[iu[same], ju[same]]
    inter = d[iu[~same], ju[~same]]

    def stats(vals):
        if vals.size == 0:
            return float("nan"), float("nan"), 0
        return float(vals.mean()), float(vals.std()), int(vals.size)

    im, isd, ic = stats(intra)
    xm, xsd, xc = stats(inter)
    return DistanceStats(
        intra_mean=im, intra_sd=isd, intra_count=ic,
        inter_mean=xm, inter_sd=xsd, inter_count=xc,
    )


def nn_same_class_fraction(features, labels) -> float:
    """Fraction of points whose nearest other point shares their label.

    Self-distance is excluded; distance ties resolve to the lowest index.
    """
    features, labels = _check_features_labels(features, labels)
    n = features.shape[0]
    if n < 2:
        raise EmptyInputError(f"need at least 2 points, got {n}")
    d2 = pairwise_sq_dists(features, features)
    np.fill_diagonal(d2, np.inf)
    nn = d2.argmin(axis=1)
    return float(np.mean(labels[nn] == labels))


def estimate_pnn(features, labels, classes_per_trial: int, trials: int, seed: int) -> PnnEstimate:
    """Monte Carlo estimate of the same-class nearest-neighbor probability.

    Each trial samples ``classes_per_trial`` distinct labels uniformly
    without replacement, restricts to their points, and records the fraction
    whose nearest neighbor (lowest-index tie-break, self excluded) carries
    the same label. Trials use independent RNG streams derived from
    (seed, trial index), so results do not depend on execution order.
    """
    features, labels = _check_features_labels(features, labels)
    if trials < 1:
        raise SamplingError(f"trials must be >= 1, got {trials}")
    uniq = np.unique(labels)
    if classes_per_trial < 1 or classes_per_trial > uniq.size:
        raise SamplingError(
            f"cannot sample {classes_per_trial} classes from {uniq.size} distinct labels"
        )

    values = np.empty(trials)
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        chosen = rng.choice(uniq, size=classes_per_trial, replace=False)
        mask = np.isin(labels, chosen)
        values[t] = nn_same_class_fraction(features[mask], labels[mask])
    return PnnEstimate(
        mean=float(values.mean()),
        sd=float(values.std()),
        trials=trials,
        classes_per_trial=classes_per_trial,
    )
