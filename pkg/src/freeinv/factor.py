"""Sliding-window maps between Bernoulli shifts, checked by enumeration.

A :class:`WindowMap` computes the output symbol at g from the input on g·D
for a fixed finite dependency set D, so it commutes with the shift by
construction.  The Ornstein-Weiss map sends x in (Z/2)^G to

    φ(x)(g) = (x(g) + x(ga), x(g) + x(gb))

and pushes the uniform measure on two symbols to the uniform measure on
four.  Only finitely many output coordinates are ever verified.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import numpy as np

from .freegroup import GroupWord, identity, inverse, multiply, parse_word, shortlex_key
from .systems import DEFAULT_BUDGET, BernoulliSystem, Configuration, check_budget, translate_window

__all__ = [
    "WindowMap",
    "InsufficientWindow",
    "PushforwardReport",
    "ornstein_weiss_map",
    "identity_map",
    "input_window",
    "apply_window_map",
    "verify_pushforward",
    "verify_equivariance",
]


class InsufficientWindow(ValueError):
    pass


@dataclass(frozen=True)
class WindowMap:
    input_alphabet: tuple
    output_alphabet: tuple
    dependency: tuple[GroupWord, ...]
    rule: Mapping[tuple, Hashable]

    def __post_init__(self):
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "output_alphabet", tuple(self.output_alphabet))
        object.__setattr__(self, "dependency", tuple(self.dependency))
        if len(set(self.dependency)) != len(self.dependency):
            raise ValueError("dependency set has repeated elements")
        outs = set(self.output_alphabet)
        for key in itertools.product(self.input_alphabet, repeat=len(self.dependency)):
            if key not in self.rule:
                raise ValueError(f"rule is not total: no output for {key}")
            if self.rule[key] not in outs:
                raise ValueError(f"rule output {self.rule[key]!r} not in output alphabet")

    @property
    def rank(self) -> int:
        return self.dependency[0].rank

    def output_at(self, x: Configuration, g: GroupWord) -> Hashable:
        """Output symbol at ``g`` read off ``x`` on ``g·D``."""
        values = []
        for d in self.dependency:
            w = multiply(g, d)
            if w not in x.values:
                raise InsufficientWindow(f"input window lacks {w} needed at {g}")
            values.append(x.values[w])
        return self.rule[tuple(values)]


def ornstein_weiss_map() -> WindowMap:
    e, a, b = (parse_word(t, 2) for t in ("1", "a", "b"))
    rule = {(x, y, z): (x ^ y, x ^ z) for x, y, z in itertools.product((0, 1), repeat=3)}
    return WindowMap((0, 1), ((0, 0), (0, 1), (1, 0), (1, 1)), (e, a, b), rule)


def identity_map(alphabet: Sequence[Hashable], rank: int) -> WindowMap:
    return WindowMap(tuple(alphabet), tuple(alphabet), (identity(rank),), {(k,): k for k in alphabet})


def input_window(wmap: WindowMap, window: Sequence[GroupWord]) -> tuple[GroupWord, ...]:
    """W·D in shortlex order."""
    return tuple(sorted({multiply(g, d) for g in window for d in wmap.dependency}, key=shortlex_key))


def apply_window_map(wmap: WindowMap, x: Configuration, window: Sequence[GroupWord]) -> Configuration:
    return Configuration({g: wmap.output_at(x, g) for g in window})


@dataclass(frozen=True)
class PushforwardReport:
    window: tuple[GroupWord, ...]
    n_inputs: int
    distribution: dict[tuple, Fraction]
    target: dict[tuple, Fraction]

    @property
    def exact_match(self) -> bool:
        keys = set(self.distribution) | set(self.target)
        return all(self.distribution.get(k, 0) == self.target.get(k, 0) for k in keys)


def verify_pushforward(
    wmap: WindowMap,
    source: BernoulliSystem,
    target: BernoulliSystem,
    window: Sequence[GroupWord],
) -> PushforwardReport:
    """Exact law of φ(x)|_W under the source product measure vs the target's.

    Every input configuration on W·D (over the source support) is weighed
    exactly and its image cell accumulated; cells are tuples of output
    symbols in the order of ``window``.
    """
    window = tuple(window)
    if tuple(target.alphabet) != wmap.output_alphabet:
        raise ValueError("target alphabet differs from the map's output alphabet")
    if not set(source.support_symbols) <= set(wmap.input_alphabet):
        raise ValueError("source alphabet is not covered by the map's input alphabet")
    inputs = input_window(wmap, window)
    n = len(inputs)
    source.check_window(n)
    check_budget(len(wmap.output_alphabet) ** len(window), source.budget)
    q = source.q
    pos = {w: i for i, w in enumerate(inputs)}
    out_index = {s: i for i, s in enumerate(wmap.output_alphabet)}
    table = np.empty((q,) * len(wmap.dependency), dtype=np.int64)
    for idx in np.ndindex(*table.shape):
        table[idx] = out_index[wmap.rule[tuple(source.support_symbols[i] for i in idx)]]
    axes = []
    for k in range(n):
        shape = [1] * n
        shape[k] = q
        axes.append(np.arange(q).reshape(shape))
    nout = len(wmap.output_alphabet)
    keys = np.zeros((1,) * n, dtype=np.int64)
    for g in window:
        sym = table[tuple(axes[pos[multiply(g, d)]] for d in wmap.dependency)]
        keys = keys * nout + sym
    keys = np.broadcast_to(keys, (q,) * n)
    uniq, masses = source.masses_by_key(keys)
    distribution = {}
    for key, m in zip(uniq.tolist(), masses):
        digits = []
        for _ in window:
            digits.append(wmap.output_alphabet[key % nout])
            key //= nout
        distribution[tuple(reversed(digits))] = m
    target_law = {}
    for cell in itertools.product(target.alphabet, repeat=len(window)):
        m = Fraction(1)
        for sym in cell:
            m *= target.prob(sym)
        target_law[cell] = m
    return PushforwardReport(window, q**n, distribution, target_law)


def verify_equivariance(
    wmap: WindowMap,
    s: GroupWord,
    window: Sequence[GroupWord],
    exhaustive: bool = True,
    samples: int = 256,
    rng: random.Random | None = None,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Check φ(s·x)|_W = (s·φ(x))|_W.

    The left side shifts the input configuration and applies the map; the
    right side applies the map on s^-1·W and shifts the output.  Inputs range
    over every configuration on W·D ∪ s^-1·W·D, or a random sample of them.
    """
    window = tuple(window)
    s_inv = inverse(s)
    pulled = tuple(multiply(s_inv, g) for g in window)
    domain = sorted(set(input_window(wmap, window)) | set(input_window(wmap, pulled)), key=shortlex_key)
    alphabet = wmap.input_alphabet
    if exhaustive:
        check_budget(len(alphabet) ** len(domain), budget)
        inputs = itertools.product(alphabet, repeat=len(domain))
    else:
        rng = rng or random.Random(0)
        inputs = (tuple(rng.choice(alphabet) for _ in domain) for _ in range(samples))
    for values in inputs:
        x = Configuration(dict(zip(domain, values)))
        lhs = apply_window_map(wmap, translate_window(s, x), window)
        rhs = translate_window(s, apply_window_map(wmap, x, pulled))
        if lhs != rhs:
            return False
    return True
