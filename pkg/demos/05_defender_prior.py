"""Which lock placement should the defender randomize over?

Grid search over priors for A(2,1) against a single bomb, first with equal
box values and then with box 1 worth ten times as much.
"""

from slbt import ModelA
from slbt.exact import gridsearch_prior, lock_configs

model = ModelA(2, 1, 7 / 12, 9 / 12)
labels = ["".join(map(str, g)) for g in lock_configs(2, 1)]

for costs in (None, [10.0, 1.0]):
    res = gridsearch_prior(model, 0.6, 1e-3, costs=costs)
    best = ", ".join(f"pi({l})={w:.3f}" for l, w in zip(labels, res.minimizers[0]))
    print(f"costs={costs or 'equal'}: min damage {res.value:.4f} at {best}")
