"""
f does not depend on the generating partition
=============================================

On a random finite system, compare f computed from the point partition
with f computed from a coarser generating partition.
"""

import random

from freeinv.finvariant import f_sequence, invariance_check
from freeinv.partitions import entropy, is_generating, point_partition
from freeinv.sampling import random_finite_system, random_generating_partition

rng = random.Random(7)
system = random_finite_system(rng, 9, uniform=True)
alpha = random_generating_partition(rng, system)
print("atoms:", alpha.n_atoms, "generating after", is_generating(alpha)[1], "steps")

# the F(α^n) values decrease until α^n is the point partition
for n, v in f_sequence(alpha).values:
    print(n, round(v, 6))

report = invariance_check(system, {"points": point_partition(system), "alpha": alpha})
for name, est in report.values.items():
    print(name, est.value, est.exact)
print("passed:", report.passed, "discrepancy:", report.discrepancy)

# the entropies themselves differ, only f agrees
print(entropy(point_partition(system)), entropy(alpha))
