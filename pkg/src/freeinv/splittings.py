"""Simple splittings, splitting certificates and combinatorial equivalence.

A simple splitting of α is α ∨ sβ with s a generator (or inverse) and β a
coarsening of α.  A :class:`SplittingCertificate` records a chain of simple
splittings as (s, merge table) steps, where the merge table presents β as a
coarsening of the running partition; :func:`replay` re-executes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .freegroup import GroupWord, ball, identity, inverse, is_connected, multiply
from .partitions import (
    Partition,
    UnsupportedBackend,
    ball_step,
    coarsen,
    is_generating,
    join,
    merge_map,
    power,
    refines,
    translate,
)
from .systems import FiniteSystem

__all__ = [
    "NotACoarsening",
    "CertificateError",
    "InvalidWitness",
    "NotGenerating",
    "SplittingStep",
    "SplittingCertificate",
    "ReplayResult",
    "EquivalenceWitness",
    "Approximation",
    "simple_split",
    "replay",
    "connected_split",
    "find_equivalence",
    "common_splitting",
    "approximate_by",
]


class NotACoarsening(ValueError):
    pass


class CertificateError(ValueError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class InvalidWitness(ValueError):
    pass


class NotGenerating(ValueError):
    pass


@dataclass(frozen=True)
class SplittingStep:
    s: GroupWord
    merge: dict[int, int]


@dataclass
class SplittingCertificate:
    start: Partition
    steps: list[SplittingStep] = field(default_factory=list)
    end: Partition | None = None

    def __post_init__(self):
        if self.end is None:
            self.end = self.start

    def __add__(self, other: "SplittingCertificate") -> "SplittingCertificate":
        if self.end != other.start:
            raise CertificateError("certificates do not chain: end != start")
        return SplittingCertificate(self.start, self.steps + other.steps, other.end)


@dataclass(frozen=True)
class ReplayResult:
    partition: Partition
    valid: bool
    reason: str = ""


@dataclass(frozen=True)
class EquivalenceWitness:
    """Radii with α ≤ β^l and β ≤ α^m."""

    l: int
    m: int


def _check_generator(s: GroupWord, rank: int) -> None:
    if s.rank != rank or len(s.letters) != 1:
        raise ValueError(f"{s!r} is not in the generating set S of rank {rank}")


def simple_split(alpha: Partition, s: GroupWord, beta: Partition) -> Partition:
    """α ∨ sβ for a coarsening β of α."""
    _check_generator(s, alpha.system.rank)
    if not refines(alpha, beta):
        raise NotACoarsening("beta is not a coarsening of alpha")
    return join(alpha, translate(s, beta))


def replay(cert: SplittingCertificate) -> ReplayResult:
    """Apply the steps of a certificate in order and compare with its end."""
    cur = cert.start
    rank = cur.system.rank
    for i, step in enumerate(cert.steps):
        try:
            _check_generator(step.s, rank)
        except ValueError as exc:
            raise CertificateError(str(exc), step=i) from None
        missing = [l for l in range(cur.n_atoms) if l not in step.merge]
        if missing:
            return ReplayResult(cur, False, f"step {i}: merge table misses labels {missing}")
        beta = coarsen(cur, step.merge)
        cur = join(cur, translate(step.s, beta))
    if cur != cert.end:
        return ReplayResult(cur, False, "replayed partition differs from the certified end")
    return ReplayResult(cur, True)


def _leaf_order(parent: dict[GroupWord, GroupWord | None], root: GroupWord) -> list[GroupWord]:
    """Nodes in the order they are removed, always the shortlex-greatest leaf."""
    children: dict[GroupWord, int] = {g: 0 for g in parent}
    for g, p in parent.items():
        if p is not None:
            children[p] += 1
    alive = set(parent)
    order = []
    while len(alive) > 1:
        leaf = max(g for g in alive if g != root and children[g] == 0)
        order.append(leaf)
        alive.remove(leaf)
        children[parent[leaf]] -= 1
    return order


def connected_split(alpha: Partition, beta: Partition, words: Iterable[GroupWord]) -> SplittingCertificate:
    """Certificate that α ∨ ⋁_{f ∈ F^-1} fβ is a splitting of α.

    Requires α to refine β and F to be finite, connected and to contain e.
    Elements of F are added back in reverse leaf-removal order of a BFS
    spanning tree; adding f0 = f1·s1 is one simple splitting by s1^-1 with the
    coarsening f1^-1·β of the running partition.
    """
    words = set(words)
    rank = alpha.system.rank
    e = identity(rank)
    if e not in words:
        raise ValueError("F must contain the identity")
    ok, parent = is_connected(words)
    if not ok:
        raise ValueError("F is not connected in the Cayley graph")
    if not refines(alpha, beta):
        raise NotACoarsening("alpha does not refine beta")
    cur = alpha
    steps = []
    for f0 in reversed(_leaf_order(parent, e)):
        f1 = parent[f0]
        s1 = multiply(inverse(f1), f0)
        gamma = translate(inverse(f1), beta)
        merge = merge_map(cur, gamma)
        t = inverse(s1)
        cur = join(cur, translate(t, gamma))
        steps.append(SplittingStep(t, merge))
    return SplittingCertificate(alpha, steps, cur)


def find_equivalence(alpha: Partition, beta: Partition, max_radius: int) -> EquivalenceWitness | None:
    """Least radii l, m <= max_radius with α ≤ β^l and β ≤ α^m.

    ``None`` means the bounded search was inconclusive, not that the two
    partitions are inequivalent.
    """

    def least(fine: Partition, coarse: Partition) -> int | None:
        cur = fine
        for r in range(max_radius + 1):
            if refines(cur, coarse):
                return r
            if r < max_radius:
                nxt = ball_step(cur)
                if nxt == cur:
                    return None
                cur = nxt
        return None

    l = least(beta, alpha)
    if l is None:
        return None
    m = least(alpha, beta)
    if m is None:
        return None
    return EquivalenceWitness(l, m)


def common_splitting(
    alpha: Partition, beta: Partition, witness: EquivalenceWitness
) -> tuple[int, SplittingCertificate]:
    """Certificate that α^n is a splitting of β, n = l + m.

    β → β^l by splitting along B(e, l), then β^l → β^l ∨ α^{l+m} along
    B(e, l+m); the last partition equals α^{l+m} because β ≤ α^m.
    """
    l, m = witness.l, witness.m
    if l < 0 or m < 0:
        raise InvalidWitness("radii must be nonnegative")
    beta_l = power(beta, l)
    if not refines(beta_l, alpha):
        raise InvalidWitness(f"alpha is not refined by beta^{l}")
    if not refines(power(alpha, m), beta):
        raise InvalidWitness(f"beta is not refined by alpha^{m}")
    rank = alpha.system.rank
    n = l + m
    first = connected_split(beta, beta, ball(rank, l).elements)
    second = connected_split(first.end, alpha, ball(rank, n).elements)
    return n, first + second


@dataclass(frozen=True)
class Approximation:
    partition: Partition
    radius: int
    errors: tuple[Fraction, ...]
    assignment: tuple[int, ...]


def approximate_by(
    alpha: Partition, beta: Partition, eps, system: FiniteSystem | None = None
) -> Approximation:
    """A partition β' ≤ α^L with μ(B_i Δ B'_i) <= eps for every atom B_i of β.

    For each L = 0, 1, ... every atom B_i is replaced by the union B''_i of
    the α^L-atoms that lie mostly inside it (the union closest to B_i in
    measure), the B''_i are made disjoint (earlier atoms lose overlaps, the
    last atom takes the remainder) and the worst error is compared with eps.
    Since α is generating, α^L is eventually the point partition and the
    error is zero.  ``errors[i]`` and ``assignment[p] == i`` refer to the
    atom of ``beta`` with label i.
    """
    system = system if system is not None else alpha.system
    if not isinstance(system, FiniteSystem):
        raise UnsupportedBackend("approximation is implemented for finite systems")
    if alpha.system is not system or beta.system is not system:
        raise ValueError("partitions belong to a different system")
    ok, n = is_generating(alpha)
    if not ok:
        raise NotGenerating("alpha is not generating")
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**12)
    w = system.weights
    pos = [p for p in range(len(system)) if w[p] > 0]
    target = beta.labels
    m = beta.n_atoms
    cur = alpha
    for L in range(n + 1):
        atoms = cur.atoms()
        inside = []
        for i in range(m):
            chosen = set()
            for A in atoms:
                inner = sum((w[p] for p in A if target[p] == i), Fraction(0))
                outer = sum((w[p] for p in A if target[p] != i), Fraction(0))
                if inner > outer:
                    chosen.update(A)
            inside.append(chosen)
        labels = np.full(len(system), m - 1, dtype=np.int64)
        for i in range(m - 1):
            others = set().union(*(inside[j] for j in range(m) if j != i))
            for p in inside[i] - others:
                labels[p] = i
        errors = tuple(
            sum((w[p] for p in pos if (target[p] == i) != (labels[p] == i)), Fraction(0)) for i in range(m)
        )
        if max(errors) <= eps:
            return Approximation(Partition(system, labels), L, errors, tuple(labels.tolist()))
        cur = ball_step(cur)
    raise AssertionError("generating partition failed to resolve points")  # pragma: no cover
