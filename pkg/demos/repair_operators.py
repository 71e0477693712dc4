"""Where each bound-repair operator sends an out-of-range value.

Run with ``python3 demos/repair_operators.py``.
"""

import numpy as np

from repairmoea import RepairKind, repair_vector

lower, upper = 0.0, 1.0
values = np.array([-0.35, -1.7, 0.4, 1.2, 2.6])

print(f"box [{lower}, {upper}]")
print("value    " + "  ".join(f"{k.value:>8}" for k in RepairKind))
for v in values:
    row = [repair_vector(np.array([v]), lower, upper, k)[0] for k in RepairKind]
    print(f"{v:>6.2f}   " + "  ".join(f"{r:>8.3f}" for r in row))

# Reverse sends undershoots to the upper bound: harmful when the optimum sits at
# the lower bound, helpful when a constraint blocks the near side.
rng = np.random.default_rng(0)
v = rng.normal(0.0, 0.1, 100_000)
for k in RepairKind:
    r = repair_vector(v, lower, upper, k)
    print(f"{k.value:>8}: mean repaired value of N(0, 0.1) draws = {r.mean():.4f}")
