"""Random systems, partitions and group elements for experiments and tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .freegroup import GroupWord, generators, identity, reduce
from .partitions import Partition, coarsen, is_generating, join, point_partition, translate
from .systems import FiniteSystem


def random_word(rng: random.Random, rank: int, max_length: int = 6) -> GroupWord:
    n = rng.randint(0, max_length)
    return reduce([rng.choice((1, -1)) * rng.randint(1, rank) for _ in range(n)], rank)


def random_finite_system(rng: random.Random, n_points: int, rank: int = 2, uniform: bool = False) -> FiniteSystem:
    """Points split into weight classes; each generator permutes within classes.

    With ``uniform=False`` some classes may get weight zero.
    """
    points = list(range(n_points))
    rng.shuffle(points)
    if uniform:
        classes = [points]
    else:
        cuts = sorted(rng.sample(range(1, n_points), rng.randint(0, min(3, n_points - 1))))
        classes = [points[a:b] for a, b in zip([0] + cuts, cuts + [n_points])]
    raw = [rng.randint(0 if len(classes) > 1 else 1, 5) for _ in classes]
    if not any(raw):
        raw[0] = 1
    total = sum(r * len(c) for r, c in zip(raw, classes))
    weights = [Fraction(0)] * n_points
    for r, c in zip(raw, classes):
        for p in c:
            weights[p] = Fraction(r, total)
    maps = []
    for _ in range(rank):
        image = [0] * n_points
        for c in classes:
            shuffled = c[:]
            rng.shuffle(shuffled)
            for src, dst in zip(c, shuffled):
                image[src] = dst
        maps.append(image)
    return FiniteSystem(weights, maps)


def random_partition(rng: random.Random, system, max_atoms: int = 3) -> Partition:
    k = rng.randint(1, max_atoms)
    return Partition.from_labels(system, [rng.randrange(k) for _ in range(len(system))])


def random_coarsening(rng: random.Random, p: Partition, max_atoms: int = 3) -> Partition:
    k = rng.randint(1, max_atoms)
    return coarsen(p, {l: rng.randrange(k) for l in range(p.n_atoms)})


def random_connected_set(rng: random.Random, rank: int, size: int) -> set[GroupWord]:
    """A connected set containing e, grown one Cayley neighbour at a time."""
    gens = generators(rank)
    out = {identity(rank)}
    while len(out) < size:
        g = rng.choice(sorted(out))
        out.add(g * rng.choice(gens))
    return out


def random_generating_partition(rng: random.Random, system: FiniteSystem, attempts: int = 200) -> Partition | None:
    """A generating partition built as a coarsening of joined translates.

    Start from a random partition γ, join it with a random translate sγ and
    coarsen the result at random; keep the first candidate that is generating
    and differs from the point partition.  ``None`` if every attempt fails.
    """
    points = point_partition(system)
    gens = generators(system.rank)
    for _ in range(attempts):
        gamma = random_partition(rng, system, 3)
        joined = join(gamma, translate(rng.choice(gens), gamma))
        cand = random_coarsening(rng, joined, 3)
        if cand != points and is_generating(cand)[0]:
            return cand
    return None
