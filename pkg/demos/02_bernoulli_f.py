"""
f of a Bernoulli shift
======================

For the coordinate partition of a Bernoulli shift every F(α^k) is the
base entropy.  Here the joins are computed by brute enumeration and
compared with H(κ).
"""

import math

from freeinv.finvariant import bernoulli_F_coefficient, bernoulli_f, f_sequence
from freeinv.partitions import coordinate_partition, power
from freeinv.systems import BernoulliSystem

coin = BernoulliSystem(["0", "1"], ["1/2", "1/2"], rank=2)
alpha = coordinate_partition(coin)

# α^1 lives on the 5 coordinates of B(e,1), so it has 32 atoms
alpha1 = power(alpha, 1)
print([str(g) for g in alpha1.window], alpha1.n_atoms)

seq = f_sequence(alpha, n_max=1)
for n, v in seq.values:
    print(f"F(alpha^{n}) = {v:.12f}   log 2 = {math.log(2):.12f}")

# a biased coin: same story with H(2/3, 1/3)
biased = BernoulliSystem(["x", "y"], ["2/3", "1/3"], rank=2)
print(f_sequence(coordinate_partition(biased), 1).values, bernoulli_f(biased))

# why: counting coordinates, F(α^k) = c·H(α) with c = 1 for every k
print([bernoulli_F_coefficient(2, k) for k in range(8)])
