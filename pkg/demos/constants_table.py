"""
Pickands-type constants of the dependence field
===============================================

Two classical summaries of the driver field Z (mean -gamma, covariance of
the pinned increments): the normalized set function f([0, N]) / N, which
approaches the Pickands constant as N grows, and the discrete extremal
index theta(n) = E max_{i<=n} e^{Z(i)} / n, which is nonincreasing in n
and bounded by 1.  Both are plain Monte Carlo means over a meshed grid.
"""

import numpy as np

from brownresnick import (
    VariogramModel,
    extremal_index_estimate,
    pickands_estimate,
)

model = VariogramModel(alpha=1.0)
reps = 100_000
mesh = 1.0 / 32.0

print(f"alpha=1, mesh 1/32, {reps} replications\n")
print(f"{'N':>4} {'f([0,N])/N':>12} {'std err':>9}")
for i, n in enumerate((1, 2, 4, 8)):
    est = pickands_estimate(model, (0.0, float(n)), mesh, reps, seed=60 + i)
    print(f"{n:>4} {est.value / n:>12.4f} {est.std_error / n:>9.4f}")

print(f"\n{'n':>4} {'theta(n)':>9} {'std err':>9}")
for i, n in enumerate((4, 16, 64)):
    est = extremal_index_estimate(model, n, reps, seed=70 + i)
    print(f"{n:>4} {est.value:>9.4f} {est.std_error:>9.4f}")

print("\nf/N decreases toward the Pickands constant; theta(n) is")
print("nonincreasing and stays in (0, 1]")
