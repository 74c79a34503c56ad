"""Nearest-neighbor label propagation over a shared unlabeled pool.

Classes take turns claiming the unclaimed pool point closest to their current
labeled set (plain Euclidean distance, smallest anywhere in the set). A
claimed point immediately joins the claiming class's labeled set, so later
claims can chain off it; that chaining is what lets a label crawl along a
sparse string of near neighbors instead of staying inside a ball around the
original support point.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DisjointSetsError, EmptyInputError
from .kernels import pairwise_sq_dists


@dataclass(frozen=True)
class LabeledSets:
    """Per-class index lists into a shared feature matrix.

    ``indices[c]`` holds the point indices currently labeled with class c.
    Lists must be pairwise disjoint.
    """

    indices: tuple

    def __post_init__(self):
        seen = set()
        for c, idx in enumerate(self.indices):
            for i in idx:
                if i in seen:
                    raise DisjointSetsError(f"index {i} appears in more than one class")
                seen.add(i)

    @classmethod
    def from_lists(cls, lists) -> "LabeledSets":
        return cls(tuple(tuple(int(i) for i in lst) for lst in lists))

    @property
    def n_classes(self) -> int:
        return len(self.indices)

    def all_indices(self):
        return [i for lst in self.indices for i in lst]


class Claim(NamedTuple):
    class_id: int
    claimed_index: int
    source_index: int
    distance: float


@dataclass(frozen=True)
class PropagationResult:
    expanded: LabeledSets
    claims: tuple

    def claims_for(self, class_id: int):
        return [c for c in self.claims if c.class_id == class_id]


def propagate_labels(
    features,
    support: LabeledSets,
    pool,
    extra_per_class: int,
) -> PropagationResult:
    """Round-robin label propagation.

    Classes are visited in ascending class-id order for ``extra_per_class``
    rounds. On each visit the class claims the pool point with the smallest
    Euclidean distance to any point it currently holds; the point leaves the
    pool at once, so no point ever carries two labels. Distance ties break
    toward the lowest point index. Claiming stops early if the pool empties.

    Returns the expanded per-class sets (claims appended after the original
    support, in claim order) and the full claim sequence, each claim
    recording which labeled point it attached to and at what distance.
    """
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, None]
    n = features.shape[0]
    if extra_per_class < 0:
        raise ValueError(f"extra_per_class must be >= 0, got {extra_per_class}")

    labeled = [list(idx) for idx in support.indices]
    for c, idx in enumerate(labeled):
        if not idx:
            raise EmptyInputError(f"class {c} has an empty support set")
    support_set = set(support.all_indices())
    pool_ids = np.array(sorted(int(i) for i in pool), dtype=int)
    if pool_ids.size != len(set(pool_ids.tolist())):
        raise DisjointSetsError("pool contains duplicate indices")
    overlap = support_set.intersection(pool_ids.tolist())
    if overlap:
        raise DisjointSetsError(f"pool overlaps support at indices {sorted(overlap)}")
    bad = [int(i) for i in pool_ids if i < 0 or i >= n] + [
        i for i in support_set if i < 0 or i >= n
    ]
    if bad:
        raise IndexError(f"indices out of range for {n} points: {sorted(set(bad))}")

    n_classes = support.n_classes
    claims = []
    if pool_ids.size and extra_per_class > 0:
        # min_d2[c][j]: squared distance from pool point j to class c's set;
        # min_src[c][j]: the labeled index attaining it. Updated incrementally.
        pool_feats = features[pool_ids]
        min_d2 = []
        min_src = []
        for c in range(n_classes):
            d2 = pairwise_sq_dists(pool_feats, features[labeled[c]])
            best = d2.argmin(axis=1)
            min_d2.append(d2[np.arange(d2.shape[0]), best])
            min_src.append(np.array([labeled[c][b] for b in best], dtype=int))

        for _ in range(extra_per_class):
            if pool_ids.size == 0:
                break
            for c in range(n_classes):
                if pool_ids.size == 0:
                    break
                j = int(np.argmin(min_d2[c]))  # pool_ids sorted, so first min = lowest index
                claimed = int(pool_ids[j])
                claims.append(
                    Claim(c, claimed, int(min_src[c][j]), float(np.sqrt(min_d2[c][j])))
                )
                labeled[c].append(claimed)
                pool_ids = np.delete(pool_ids, j)
                for cc in range(n_classes):
                    min_d2[cc] = np.delete(min_d2[cc], j)
                    min_src[cc] = np.delete(min_src[cc], j)
                if pool_ids.size:
                    d2_new = pairwise_sq_dists(features[pool_ids], features[[claimed]])[:, 0]
                    closer = d2_new < min_d2[c]
                    min_d2[c] = np.where(closer, d2_new, min_d2[c])
                    min_src[c] = np.where(closer, claimed, min_src[c])

    expanded = LabeledSets(tuple(tuple(lst) for lst in labeled))
    return PropagationResult(expanded=expanded, claims=tuple(claims))
