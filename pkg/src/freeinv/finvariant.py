"""The F functional, the sequence F(α^n) and the invariant f(α) = inf_n F(α^n).

``F(α) = (1 - 2r) H(α) + Σ_i H(α ∨ s_i α)``, with the sum over the r free
generators (not their inverses).  Along the ball joins α^n the values are
nonincreasing, so every prefix minimum is an upper bound for f(α); on a
finite system the joins stabilize and the bound is attained.

:func:`generic_phi` runs the same driver for any functional declared
monotone under splittings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .freegroup import ball_size, ball_union_size, generators
from .partitions import (
    Partition,
    UnsupportedBackend,
    ball_step,
    coordinate_partition,
    entropy,
    is_generating,
    join,
    to_unit,
    translate,
)
from .systems import BernoulliSystem, BudgetExceeded, FiniteSystem

__all__ = [
    "MonotoneFunctional",
    "FSequence",
    "FEstimate",
    "F",
    "F_FUNCTIONAL",
    "phi_sequence",
    "f_sequence",
    "f_estimate",
    "generic_phi",
    "bernoulli_f",
    "bernoulli_F_coefficient",
    "bernoulli_F_analytic",
    "InvarianceReport",
    "invariance_check",
    "DEFAULT_BERNOULLI_NMAX",
]

DEFAULT_BERNOULLI_NMAX = 3


def F(alpha: Partition) -> float:
    """(1 - 2r) H(α) + Σ_{i=1}^r H(α ∨ s_i α), in nats.  May be negative."""
    r = alpha.system.rank
    h = entropy(alpha)
    # repeated terms instead of (1 - 2r)·h, so fsum rounds the total once
    terms = [-h] * (2 * r - 1)
    for s in generators(r)[::2]:
        terms.append(entropy(join(alpha, translate(s, alpha))))
    return math.fsum(terms)


@dataclass(frozen=True)
class MonotoneFunctional:
    """A real functional on partitions declared nonincreasing under splittings.

    Continuity and monotonicity are a contract on the caller's side; nothing
    here can check them per call.
    """

    evaluator: Callable[[Partition], float]
    name: str

    def __call__(self, alpha: Partition) -> float:
        return self.evaluator(alpha)


F_FUNCTIONAL = MonotoneFunctional(F, "F")


@dataclass
class FSequence:
    partition: Partition
    values: list[tuple[int, float]] = field(default_factory=list)
    stabilized: bool = False
    budget_exceeded: bool = False
    functional: str = "F"

    def is_nonincreasing(self, tol: float = 1e-9) -> bool:
        v = [x for _, x in self.values]
        return all(b <= a + tol for a, b in zip(v, v[1:]))

    def violations(self, tol: float = 1e-9) -> list[int]:
        """Radii n at which the value rose above the value at n - 1."""
        return [n for (_, a), (n, b) in zip(self.values, self.values[1:]) if b > a + tol]


@dataclass(frozen=True)
class FEstimate:
    value: float
    n_reached: int
    exact: bool

    def as_dict(self, unit: str = "nats") -> dict:
        return {"f": to_unit(self.value, unit), "n_reached": self.n_reached, "exact": self.exact, "unit": unit}


def phi_sequence(phi: Callable[[Partition], float], alpha: Partition, n_max: int | None = None) -> FSequence:
    """Values Φ(α^k) for k = 0..n_max.

    Stops early once α^{k+1} = α^k, since every later join is then equal.
    ``n_max=None`` means "until stabilization" on a finite system and
    :data:`DEFAULT_BERNOULLI_NMAX` on a Bernoulli system.  If the enumeration
    budget runs out after at least one value, the partial sequence comes back
    with ``budget_exceeded`` set.
    """
    if n_max is None:
        n_max = DEFAULT_BERNOULLI_NMAX if alpha.is_bernoulli else None
    elif n_max < 0:
        raise ValueError("n_max must be nonnegative")
    name = getattr(phi, "name", getattr(phi, "__name__", "phi"))
    seq = FSequence(alpha, functional=name)
    cur, k = alpha, 0
    while True:
        try:
            seq.values.append((k, phi(cur)))
            if n_max is not None and k >= n_max:
                break
            nxt = ball_step(cur)
        except BudgetExceeded:
            if not seq.values:
                raise
            seq.budget_exceeded = True
            break
        if nxt == cur:
            seq.stabilized = True
            break
        cur, k = nxt, k + 1
    return seq


def f_sequence(alpha: Partition, n_max: int | None = None) -> FSequence:
    return phi_sequence(F_FUNCTIONAL, alpha, n_max)


def _is_canonical_bernoulli(alpha: Partition) -> bool:
    return isinstance(alpha.system, BernoulliSystem) and alpha == coordinate_partition(alpha.system)


def generic_phi(phi: Callable[[Partition], float], alpha: Partition, n_max: int | None = None) -> FEstimate:
    """Upper bound min_k Φ(α^k); exact when the joins stabilized."""
    seq = phi_sequence(phi, alpha, n_max)
    value = min(v for _, v in seq.values)
    return FEstimate(value, seq.values[-1][0], seq.stabilized)


def f_estimate(alpha: Partition, n_max: int | None = None) -> FEstimate:
    """Estimate f(α).

    For the canonical partition of a Bernoulli shift the value is the base
    entropy H(κ), which the computed prefix agrees with; the result is then
    flagged exact.
    """
    est = generic_phi(F_FUNCTIONAL, alpha, n_max)
    if _is_canonical_bernoulli(alpha):
        return FEstimate(bernoulli_f(alpha.system), est.n_reached, True)
    return est


def bernoulli_f(system: BernoulliSystem, unit: str = "nats") -> float:
    """H(κ) = -Σ κ(k) log κ(k)."""
    return to_unit(system.entropy_base(), unit)


def bernoulli_F_coefficient(rank: int, k: int) -> int:
    """Integer c with F(α^k) = c·H(α) for the canonical Bernoulli partition.

    Independence of distinct coordinates gives H(α^k ∨ sα^k) =
    |B(e,k) ∪ B(s,k)|·H(α) and H(α^k) = |B(e,k)|·H(α), hence
    c = (|S|/2)|B(e,k) ∪ B(s,k)| - (|S| - 1)|B(e,k)|.
    """
    s = 2 * rank
    return (s * ball_union_size(rank, k)) // 2 - (s - 1) * ball_size(rank, k)


def bernoulli_F_analytic(system: BernoulliSystem, k: int) -> float:
    return bernoulli_F_coefficient(system.rank, k) * bernoulli_f(system)


@dataclass
class InvarianceReport:
    values: dict[str, FEstimate]
    excluded: dict[str, str]
    discrepancy: float
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.tolerance and all(e.exact for e in self.values.values())


def invariance_check(
    system: FiniteSystem,
    partitions: Mapping[str, Partition] | Sequence[Partition],
    n_max: int | None = None,
    tolerance: float = 1e-9,
) -> InvarianceReport:
    """Compute f for each generating partition and compare them pairwise."""
    if not isinstance(system, FiniteSystem):
        raise UnsupportedBackend("invariance check needs a finite system")
    if not isinstance(partitions, Mapping):
        partitions = {str(i): p for i, p in enumerate(partitions)}
    values: dict[str, FEstimate] = {}
    excluded: dict[str, str] = {}
    for name, p in partitions.items():
        if p.system is not system:
            excluded[name] = "belongs to a different system"
            continue
        ok, _ = is_generating(p)
        if not ok:
            excluded[name] = "not generating"
            continue
        values[name] = f_estimate(p, n_max)
    vs = [e.value for e in values.values()]
    discrepancy = max(vs) - min(vs) if vs else 0.0
    return InvarianceReport(values, excluded, discrepancy, tolerance)
