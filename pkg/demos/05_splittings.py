"""
Splitting certificates
======================

A splitting is a chain of steps α ↦ α ∨ sβ with s a generator and β a
coarsening.  Joining translates over a connected set is such a chain, and
two combinatorially equivalent partitions have a common splitting.
"""

import random

from freeinv.freegroup import ball
from freeinv.partitions import coordinate_partition, join_over, point_partition, power
from freeinv.sampling import random_finite_system, random_generating_partition
from freeinv.splittings import common_splitting, connected_split, find_equivalence, replay
from freeinv.systems import BernoulliSystem

coin = BernoulliSystem(["0", "1"], ["1/2", "1/2"], rank=2)
alpha = coordinate_partition(coin)

# B(e,1) is connected, so α^1 is reached in 4 simple splittings
cert = connected_split(alpha, alpha, ball(2, 1).elements)
for step in cert.steps:
    print(step.s, step.merge)
print(cert.end == join_over(alpha, ball(2, 1)), replay(cert).valid)

# on a finite system, the point partition and a generating α
rng = random.Random(1)
system = random_finite_system(rng, 8, uniform=True)
alpha = random_generating_partition(rng, system)
beta = point_partition(system)
witness = find_equivalence(alpha, beta, max_radius=8)
print(witness)

n, cert = common_splitting(alpha, beta, witness)
print(n, len(cert.steps), cert.end == power(alpha, n), replay(cert).valid)
