"""How much does a minus signal say about a box?

Walks through the minus-count distribution and the posterior table for a
small instance, computing the ratio three independent ways.
"""

import numpy as np

from slbt import ModelA, minus_count_pmf, posterior_from_counts, posterior_from_expectations, ratio_via_c

model = ModelA(n=3, k=1, a=7 / 12, b=9 / 12)
print(f"A({model.n},{model.k}) with a={model.a:.4f}, b={model.b:.4f}, c={model.c:.3f}")

# distribution of the number of minus signals, scaled to the common denominator
g = minus_count_pmf(model).mass
print("g * 192 =", np.round(g * 192, 9))

t2, t3 = posterior_from_counts(model), posterior_from_expectations(model)
print(f"{'x':>2} {'p_minus':>9} {'p_plus':>9} {'r (g)':>9} {'r (E)':>9} {'r (c)':>9}")
for x in range(1, model.n):
    print(f"{x:>2} {t2.p_minus[x]:9.5f} {t2.p_plus[x]:9.5f} "
          f"{t2.ratio[x]:9.5f} {t3.ratio[x]:9.5f} {ratio_via_c(model, x):9.5f}")

# a box that tests minus is always the better target, and more so as x grows
assert np.all(t2.ratio[1:model.n] > 1)
