"""Cross-check the closed-form planner against exhaustive search.

For every interior x the brute-force oracle enumerates all bomb splits; the
planner's layered allocation must be one of its maximizers.
"""

from slbt import ExplosionModel, ModelA, solve
from slbt.exact import oracle_for_row

model, p, m = ModelA(7, 3, 7 / 12, 9 / 12), 0.6, 15
tables = solve(model, ExplosionModel(p), m)

for x in range(1, model.n):
    row = tables.posterior.row(x)
    res = oracle_for_row(row.p_minus, row.p_plus, model.n, x, p, m)
    t = tables.alloc[x][m]
    counts = tuple(t.minus_counts(x) + t.plus_counts(model.n - x))
    gap = abs(tables.v_xm[x, m] - res.value)
    print(f"x={x}  planner={tables.v_xm[x, m]:.6f}  oracle={res.value:.6f}  "
          f"gap={gap:.1e}  {t} optimal={counts in res.maximizers}")
