"""Exactly computable measure-preserving actions of a free group.

Two backends share one contract, ``masses_by_key``: given an integer key
for every resolvable cell of the space, return the exact measure carried by
each key.

* :class:`FiniteSystem` -- finitely many weighted points, one permutation per
  generator.  Cells are points.
* :class:`BernoulliSystem` -- the shift on K^G with product measure.  Cells
  are configurations on a finite window; only symbols of positive probability
  are ever enumerated, so every cell has positive measure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold
from typing import Any, Hashable, Mapping, Sequence

import numpy as np

from .freegroup import GroupWord, multiply

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "InvalidSystemError",
    "WeightSumError",
    "NonBijectiveError",
    "WeightNotPreservedError",
    "FiniteSystem",
    "BernoulliSystem",
    "Configuration",
    "validate",
    "act",
    "cylinder_measure",
    "translate_window",
    "as_fraction",
]

DEFAULT_BUDGET = 2**24


class BudgetExceeded(RuntimeError):
    """An enumeration would visit more cells than the configured budget."""


class InvalidSystemError(ValueError):
    def __init__(self, message: str, index: Any = None):
        super().__init__(message)
        self.index = index


class WeightSumError(InvalidSystemError):
    pass


class NonBijectiveError(InvalidSystemError):
    pass


class WeightNotPreservedError(InvalidSystemError):
    pass


def as_fraction(value: Any) -> Fraction:
    """Exact rational from ``"p/q"``, ``"1"``, int or Fraction.

    Floats are rejected; they are not exact.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a 'p/q' string")
    return Fraction(value)


def check_budget(cells: int, budget: int) -> None:
    if cells > budget:
        raise BudgetExceeded(f"enumeration of {cells} cells exceeds budget {budget}")


class FiniteSystem:
    """Finite probability space with a weight-preserving action of F_r.

    ``generator_maps[i][p]`` is the image of point ``p`` under ``s_{i+1}``.
    """

    def __init__(
        self,
        weights: Sequence[Any],
        generator_maps: Sequence[Sequence[int]],
        points: Sequence[Hashable] | None = None,
        budget: int = DEFAULT_BUDGET,
    ):
        self.weights = tuple(as_fraction(w) for w in weights)
        self.generator_maps = tuple(tuple(int(i) for i in m) for m in generator_maps)
        self.rank = len(self.generator_maps)
        self.points = tuple(points) if points is not None else tuple(range(len(self.weights)))
        self.budget = budget
        validate(self)
        self._forward = [np.asarray(m, dtype=np.int64) for m in self.generator_maps]
        self._backward = [np.argsort(m) for m in self._forward]
        self.positive = np.array([w > 0 for w in self.weights], dtype=bool)
        den = _fold(math.lcm, (w.denominator for w in self.weights), 1)
        self._denominator = den
        self._numerators = [w.numerator * (den // w.denominator) for w in self.weights]

    def __len__(self) -> int:
        return len(self.weights)

    def __repr__(self) -> str:
        return f"FiniteSystem(n={len(self)}, rank={self.rank})"

    def permutation(self, g: GroupWord) -> np.ndarray:
        """Array ``perm`` with ``perm[p] = g . p``."""
        perm = np.arange(len(self), dtype=np.int64)
        # rightmost letter acts first
        for letter in reversed(g.letters):
            step = self._forward[letter - 1] if letter > 0 else self._backward[-letter - 1]
            perm = step[perm]
        return perm

    def act(self, g: GroupWord, p: int) -> int:
        for letter in reversed(g.letters):
            if letter > 0:
                p = self.generator_maps[letter - 1][p]
            else:
                p = int(self._backward[-letter - 1][p])
        return p

    def masses_by_key(self, keys: np.ndarray) -> tuple[np.ndarray, list[Fraction]]:
        """Exact measure of each distinct nonnegative key.

        ``keys`` has one entry per point; null points must carry ``-1``.
        """
        totals: dict[int, int] = {}
        for p, k in enumerate(keys.tolist()):
            if k < 0:
                continue
            totals[k] = totals.get(k, 0) + self._numerators[p]
        uniq = np.array(sorted(totals), dtype=np.int64)
        return uniq, [Fraction(totals[k], self._denominator) for k in uniq.tolist()]


class BernoulliSystem:
    """Bernoulli shift over F_r with finite base (K, kappa).

    Configurations over a window of ``d`` group elements are encoded as
    integer arrays of shape ``(q,) * d`` where ``q`` is the number of symbols
    of positive probability (the *support*).
    """

    def __init__(
        self,
        alphabet: Sequence[Hashable],
        probs: Sequence[Any],
        rank: int,
        budget: int = DEFAULT_BUDGET,
    ):
        self.alphabet = tuple(alphabet)
        self.probs = tuple(as_fraction(p) for p in probs)
        self.rank = int(rank)
        self.budget = budget
        validate(self)
        self.support = tuple(i for i, p in enumerate(self.probs) if p > 0)
        self.support_symbols = tuple(self.alphabet[i] for i in self.support)
        self._symbol_index = {s: i for i, s in enumerate(self.alphabet)}
        self._support_index = {self.alphabet[i]: j for j, i in enumerate(self.support)}
        sp = [self.probs[i] for i in self.support]
        den = _fold(math.lcm, (p.denominator for p in sp), 1)
        self._denominator = den
        self._numerators = [p.numerator * (den // p.denominator) for p in sp]
        self._uniform = len(set(sp)) == 1
        self._comp_cache: dict[int, tuple[np.ndarray, list[int]]] = {}

    @property
    def q(self) -> int:
        return len(self.support)

    def __repr__(self) -> str:
        return f"BernoulliSystem(alphabet={self.alphabet!r}, probs={[str(p) for p in self.probs]}, rank={self.rank})"

    def prob(self, symbol: Hashable) -> Fraction:
        try:
            return self.probs[self._symbol_index[symbol]]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet") from None

    def support_index(self, symbol: Hashable) -> int:
        """Position of ``symbol`` in the support; raises for null symbols."""
        if symbol not in self._symbol_index:
            raise ValueError(f"symbol {symbol!r} not in alphabet")
        try:
            return self._support_index[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} has probability zero") from None

    def cells(self, ndim: int) -> int:
        return self.q**ndim

    def check_window(self, ndim: int) -> None:
        check_budget(self.cells(ndim), self.budget)

    def _compositions(self, ndim: int) -> tuple[np.ndarray, list[int]]:
        """Per-cell composition class and the exact numerator of each class.

        Cell weight only depends on how many times each symbol occurs, so
        cells are grouped by composition before any rational arithmetic.
        """
        cached = self._comp_cache.get(ndim)
        if cached is not None:
            return cached
        q = self.q
        base = ndim + 1
        if base**q < 2**62:
            code = np.zeros((q,) * ndim, dtype=np.int64)
            digit = np.array([base**k for k in range(q)], dtype=np.int64)
            for axis in range(ndim):
                shape = [1] * ndim
                shape[axis] = q
                code = code + digit.reshape(shape)
            uniq, inv = np.unique(code.ravel(), return_inverse=True)
            comps = []
            for c in uniq.tolist():
                counts = []
                for _ in range(q):
                    counts.append(c % base)
                    c //= base
                comps.append(counts)
        else:
            counts = np.zeros((q**ndim, q), dtype=np.int64)
            grid = np.indices((q,) * ndim).reshape(ndim, -1)
            for k in range(q):
                counts[:, k] = (grid == k).sum(axis=0)
            uniq_rows, inv = np.unique(counts, axis=0, return_inverse=True)
            comps = uniq_rows.tolist()
        nums = [math.prod(n**c for n, c in zip(self._numerators, comp)) for comp in comps]
        result = (inv.reshape(-1).astype(np.int64), nums)
        if ndim <= 20:
            self._comp_cache[ndim] = result
        return result

    def masses_by_key(self, keys: np.ndarray) -> tuple[np.ndarray, list[Fraction]]:
        """Exact measure of each distinct key of a cell array of shape (q,)*d."""
        ndim = keys.ndim
        denom = self._denominator**ndim
        flat = keys.reshape(-1)
        if self._uniform:
            uniq, counts = np.unique(flat, return_counts=True)
            unit = self._numerators[0] ** ndim if ndim else 1
            return uniq, [Fraction(int(c) * unit, denom) for c in counts.tolist()]
        comp, nums = self._compositions(ndim)
        ncomp = len(nums)
        uniq_keys, key_idx = np.unique(flat, return_inverse=True)
        joint = key_idx.reshape(-1).astype(np.int64) * ncomp + comp
        pairs, counts = np.unique(joint, return_counts=True)
        totals = [0] * len(uniq_keys)
        for pair, c in zip(pairs.tolist(), counts.tolist()):
            totals[pair // ncomp] += c * nums[pair % ncomp]
        return uniq_keys, [Fraction(t, denom) for t in totals]

    def entropy_base(self) -> float:
        return -math.fsum(float(p) * math.log(p) for p in self.probs if p > 0)


@dataclass(frozen=True)
class Configuration:
    """Values of a point x in K^G on a finite window of G."""

    values: Mapping[GroupWord, Hashable]

    @property
    def window(self) -> frozenset:
        return frozenset(self.values)

    def __getitem__(self, w: GroupWord) -> Hashable:
        return self.values[w]

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and dict(self.values) == dict(other.values)

    def __hash__(self) -> int:
        return hash(frozenset(self.values.items()))


def validate(system):
    """Check the invariants of a system; returns it unchanged when valid."""
    if isinstance(system, FiniteSystem):
        n = len(system.weights)
        if n == 0:
            raise InvalidSystemError("system has no points")
        for i, w in enumerate(system.weights):
            if w < 0:
                raise InvalidSystemError(f"negative weight {w} at point {i}", index=i)
        total = sum(system.weights, Fraction(0))
        if total != 1:
            raise WeightSumError(f"weights sum to {total}, not 1", index=None)
        if len(system.points) != n:
            raise InvalidSystemError("points and weights differ in length")
        if system.rank < 1:
            raise InvalidSystemError("need at least one generator map")
        for gi, m in enumerate(system.generator_maps):
            if len(m) != n:
                raise NonBijectiveError(f"generator {gi + 1} has {len(m)} entries for {n} points", index=(gi, None))
            seen: set[int] = set()
            for p, t in enumerate(m):
                if not 0 <= t < n or t in seen:
                    raise NonBijectiveError(f"generator {gi + 1} is not a bijection (point {p})", index=(gi, p))
                seen.add(t)
            for p, t in enumerate(m):
                if system.weights[p] != system.weights[t]:
                    raise WeightNotPreservedError(
                        f"generator {gi + 1} sends point {p} (weight {system.weights[p]}) "
                        f"to point {t} (weight {system.weights[t]})",
                        index=(gi, p),
                    )
        return system
    if isinstance(system, BernoulliSystem):
        if not system.alphabet:
            raise InvalidSystemError("alphabet is empty")
        if len(set(system.alphabet)) != len(system.alphabet):
            raise InvalidSystemError("alphabet symbols are not distinct")
        if len(system.probs) != len(system.alphabet):
            raise InvalidSystemError("alphabet and probabilities differ in length")
        for i, p in enumerate(system.probs):
            if p < 0:
                raise InvalidSystemError(f"negative probability {p} for symbol {system.alphabet[i]!r}", index=i)
        total = sum(system.probs, Fraction(0))
        if total != 1:
            raise WeightSumError(f"probabilities sum to {total}, not 1")
        if system.rank < 1:
            raise InvalidSystemError("rank must be positive")
        return system
    raise TypeError(f"not a system: {system!r}")


def act(system: FiniteSystem, g: GroupWord, p: int) -> int:
    return system.act(g, p)


def cylinder_measure(system: BernoulliSystem, c: Configuration) -> Fraction:
    """Product measure of the cylinder {x : x|_W = c}."""
    m = Fraction(1)
    for v in c.values.values():
        m *= system.prob(v)
    return m


def translate_window(g: GroupWord, c: Configuration) -> Configuration:
    """Configuration of ``g x`` on ``g W`` given that of ``x`` on ``W``.

    Since (gx)(gw) = x(w), the value at ``g w`` is the old value at ``w``.
    """
    return Configuration({multiply(g, w): v for w, v in c.values.items()})


def all_configurations(system: BernoulliSystem, window: Sequence[GroupWord]):
    """Iterate every support configuration on ``window`` (lexicographic)."""
    system.check_window(len(window))
    for values in itertools.product(system.support_symbols, repeat=len(window)):
        yield Configuration(dict(zip(window, values)))
