"""The f-invariant for measure-preserving actions of free groups.

Exact partition calculus over finite actions and Bernoulli shifts, the
functional F and its infimum along ball joins, splitting certificates and
the Ornstein-Weiss factor check.
"""

from .freegroup import GroupWord, ball, ball_size, ball_union_size, generators, identity, parse_word
from .systems import BernoulliSystem, BudgetExceeded, Configuration, FiniteSystem
from .partitions import (
    Partition,
    coarsen,
    conditional_entropy,
    coordinate_partition,
    entropy,
    is_generating,
    join,
    join_over,
    point_partition,
    power,
    refines,
    rokhlin_distance,
    translate,
    trivial_partition,
)
from .finvariant import F, bernoulli_f, f_estimate, f_sequence, generic_phi, invariance_check
from .splittings import common_splitting, connected_split, find_equivalence, replay, simple_split

__version__ = "0.1.0"
