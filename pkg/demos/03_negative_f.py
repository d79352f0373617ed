"""
A negative f
============

Two points, both generators swap them.  The point partition is fixed by
the action, so the sequence stabilizes immediately and f = -log 2.
"""

import math

from freeinv.finvariant import F, f_estimate, f_sequence
from freeinv.partitions import entropy, point_partition
from freeinv.systems import FiniteSystem

swap = FiniteSystem(["1/2", "1/2"], [[1, 0], [1, 0]])
alpha = point_partition(swap)

# H(α) = log 2 and each join α ∨ s_i α is α again
print(entropy(alpha), F(alpha), -math.log(2))

seq = f_sequence(alpha)
print(seq.values, "stabilized:", seq.stabilized)
print(f_estimate(alpha))
