"""
Running the full check suite
============================

Every check returns a report with the worst residual seen over its sweep.
This is what ``entropylab verify --all`` prints.
"""

# %%
from entropylab.axiom_lab import CHECKS, run_check

# %%
reports = [run_check(name, seed=42) for name in CHECKS]
for r in reports:
    print(f"{r.check_name:<20} {r.cases_run:>7} cases  worst {r.worst_residual:.3e}  "
          f"{r.criterion:<9} {'pass' if r.passed else 'FAIL'}")

# %%
# A broken entropy (minus sign dropped) is still additive, but it is
# negative, and the decomposition identity no longer balances.
import math

from entropylab import dist_core

original = dist_core._entropy_nats
dist_core._entropy_nats = lambda masses: math.fsum(m * p * math.log(p) for p, m in masses if p > 0)
try:
    for name in ("general-additivity", "decomposition"):
        r = run_check(name, trials=100)
        print(f"{name:<20} worst {r.worst_residual:.3e}  {'pass' if r.passed else 'FAIL'}")
finally:
    dist_core._entropy_nats = original
