"""Solve A(7,3) and look at the attacker's plan.

Prints the advantage levels d(x), the layered allocations for 15 bombs and
the value grid v(x, m) for a few bomb counts.
"""

from slbt import ExplosionModel, ModelA, solve

model = ModelA(7, 3, 7 / 12, 9 / 12)
tables = solve(model, ExplosionModel(0.6), m_max=15)

print("d(x):", tables.d[1:model.n].tolist())
print("allocations for m=15 (l-, e-; l+, e+):")
for x in range(1, model.n):
    print(f"  x={x}: {tables.alloc[x][15]}")

ms = (1, 5, 10, 15)
print("\n x " + "".join(f"{'m=' + str(m):>9}" for m in ms))
for x in range(model.n + 1):
    print(f"{x:>2} " + "".join(f"{tables.v_xm[x, m]:9.4f}" for m in ms))
print("v(m)" + "".join(f"{tables.v_m[m]:9.4f}" for m in ms)[1:])
