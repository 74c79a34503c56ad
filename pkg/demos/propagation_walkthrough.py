"""Watch two labeled points claim a line of unlabeled neighbors.

Seven points on a line, one labeled example per class at each end. Each
propagation round lets every class claim its nearest pool point; claims then
serve as sources for later claims, so labels crawl outward. The middle point
is left unclaimed once both budgets are spent.
"""

import numpy as np

from kprop.propagation import LabeledSets, propagate_labels

feats = np.array([0.0, 10.0, 1.0, 2.0, 9.0, 8.5, 5.0])
support = LabeledSets.from_lists([[0], [1]])
pool = [2, 3, 4, 5, 6]

print("positions:", ", ".join(f"{i}:{feats[i]:g}" for i in range(len(feats))))
print("class A starts at index 0, class B at index 1, pool:", pool)
print()

res = propagate_labels(feats, support, pool, extra_per_class=2)

for n, claim in enumerate(res.claims, 1):
    name = "AB"[claim.class_id]
    print(
        f"claim {n}: class {name} takes index {claim.claimed_index} "
        f"(position {feats[claim.claimed_index]:g}) from source index "
        f"{claim.source_index}, distance {claim.distance:g}"
    )

print()
for c, members in enumerate(res.expanded.indices):
    print(f"class {'AB'[c]} expanded set: {list(members)}")
unclaimed = [i for i in pool if i not in res.expanded.all_indices()]
print(f"unclaimed: {unclaimed} (position {[float(feats[i]) for i in unclaimed]})")
