"""
From uniform dice to the general formula
========================================

Three numerical steps:

1. ``x * dH/dx`` is constant for ``H(x) = log x``, so the uniform case is a
   logarithm whose base fixes the constant.
2. For counts ``n_i`` out of ``N``, ``log N`` splits into the entropy of
   picking a group plus the weighted entropy of picking within the group.
3. Irrational probabilities are limits of such count vectors.
"""

# %%
import math

import numpy as np

from entropylab import RationalDist, RealDist, continuity_convergence, decompose, estimate_k

# %%
# Step 1: finite differences of log2 on a geometric grid.
fit = estimate_k(1, 100, 1000, base=2)
print(f"k = {fit.k_estimate:.6f}  (1/ln 2 = {1 / math.log(2):.6f}), max deviation {fit.max_deviation:.1e}")

for base in (2, math.e, 10):
    print(f"base {base:.4g}: k = {estimate_k(base=base).k_estimate:.6f}")

# %%
# A linear grid gives the same mean but a less flat profile near x = 1.
lin = estimate_k(1, 100, 1000, base=2, spacing="linear")
print(f"linear grid: k = {lin.k_estimate:.6f}, max deviation {lin.max_deviation:.1e}")

# %%
# Step 2: 3 oranges and 7 apples.
rep = decompose(RationalDist((3, 7)))
print(f"log2 10 = {rep.log_total:.6f}")
print(f"  within-group term {rep.group_term:.6f} + entropy {rep.entropy_term:.6f}")
print(f"  residual {rep.residual:.1e}")

# %%
# Step 3: approximate (1/pi, 1 - 1/pi) with denominators 10 .. 10^6.
p = 1 / math.pi
schedule = [10**k for k in range(1, 7)]
points = continuity_convergence(RealDist((p, 1 - p)), schedule)
for pt in points:
    print(f"N={pt.N:>8}  counts={pt.counts}  |dH|={pt.error:.3e}")

errors = np.array([pt.error for pt in points])
print("error * N:", np.round(errors * np.array(schedule), 3))
