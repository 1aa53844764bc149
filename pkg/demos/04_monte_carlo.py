"""Simulate the whole process and compare with the analytic value.

Locks, test outcomes, bomb placement and explosions are all sampled; the
seeded stream makes each run reproducible.
"""

from slbt import ExplosionModel, ModelA, solve
from slbt.montecarlo import SimConfig, simulate

model, expl, m = ModelA(7, 3, 7 / 12, 9 / 12), ExplosionModel(0.6), 5
exact = solve(model, expl, m)

res = simulate(SimConfig(model, expl, m, trials=400_000, seed=2024), workers=4)
print(f"simulated {res.mean_destroyed:.4f} +/- {res.std_error:.4f}, analytic {exact.v_m[m]:.4f}, "
      f"z = {res.z_score(exact.v_m[m]):+.2f}")

for x in range(model.n + 1):
    if res.trials_per_x[x]:
        print(f"  x={x}: {res.trials_per_x[x]:>7} trials  mean {res.per_x_means[x]:.4f}  "
              f"v(x,m) {exact.v_xm[x, m]:.4f}")
