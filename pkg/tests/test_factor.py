import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import pytest

from freeinv.factor import (
    InsufficientWindow,
    WindowMap,
    apply_window_map,
    identity_map,
    input_window,
    ornstein_weiss_map,
    verify_equivariance,
    verify_pushforward,
)
from freeinv.finvariant import bernoulli_f
from freeinv.freegroup import ball, generators, identity, parse_word
from freeinv.systems import BernoulliSystem, BudgetExceeded, Configuration, cylinder_measure

PAIRS = [(0, 0), (0, 1), (1, 0), (1, 1)]


def w(text):
    return parse_word(text, 2)


@pytest.fixture
def bits():
    return BernoulliSystem([0, 1], ["1/2", "1/2"], 2)


@pytest.fixture
def quads():
    return BernoulliSystem(PAIRS, ["1/4"] * 4, 2)


def oracle_law(wmap, source, window):
    """Output law on ``window`` by looping over every input configuration."""
    dom = sorted({g * d for g in window for d in wmap.dependency})
    law = {}
    for vals in itertools.product(source.alphabet, repeat=len(dom)):
        x = Configuration(dict(zip(dom, vals)))
        m = cylinder_measure(source, x)
        if m == 0:
            continue
        y = apply_window_map(wmap, x, window)
        cell = tuple(y[g] for g in window)
        law[cell] = law.get(cell, Fraction(0)) + m
    return law


@dataclass(frozen=True)
class ShiftedRule(WindowMap):
    """Flips the first output bit wherever g has odd length."""

    def output_at(self, x, g):
        out = super().output_at(x, g)
        return (out[0] ^ (len(g.letters) % 2), out[1])


class TestApply:
    @pytest.mark.parametrize(
        "xe, xa, xb, expected",
        [(0, 0, 0, (0, 0)), (1, 0, 1, (1, 0)), (0, 1, 1, (1, 1)), (1, 1, 1, (0, 0))],
    )
    def test_ow_rule(self, xe, xa, xb, expected):
        x = Configuration({identity(2): xe, w("a"): xa, w("b"): xb})
        out = apply_window_map(ornstein_weiss_map(), x, [identity(2)])
        assert out[identity(2)] == expected

    def test_insufficient_window(self):
        x = Configuration({identity(2): 0, w("a"): 1})
        with pytest.raises(InsufficientWindow):
            apply_window_map(ornstein_weiss_map(), x, [identity(2)])

    def test_rule_must_be_total(self):
        with pytest.raises(ValueError):
            WindowMap((0, 1), (0, 1), (identity(2),), {(0,): 0})
        with pytest.raises(ValueError):
            WindowMap((0, 1), (0, 1), (identity(2),), {(0,): 0, (1,): 2})

    def test_input_window_sizes(self):
        ow = ornstein_weiss_map()
        assert len(input_window(ow, [identity(2)])) == 3
        # B(e,1)·{e,a,b}, counted directly
        direct = {g * d for g in ball(2, 1) for d in (identity(2), w("a"), w("b"))}
        assert len(input_window(ow, ball(2, 1).elements)) == len(direct) == 11


class TestPushforward:
    def test_single_site(self, bits, quads):
        rep = verify_pushforward(ornstein_weiss_map(), bits, quads, [identity(2)])
        assert rep.n_inputs == 8 and rep.exact_match
        assert rep.distribution == {(p,): Fraction(1, 4) for p in PAIRS}

    def test_unit_ball(self, bits, quads):
        W = ball(2, 1).elements
        rep = verify_pushforward(ornstein_weiss_map(), bits, quads, W)
        assert rep.n_inputs == 2**11
        assert rep.exact_match
        assert len(rep.distribution) == 4**5
        assert sum(rep.distribution.values()) == 1 == sum(rep.target.values())
        assert rep.distribution == oracle_law(ornstein_weiss_map(), bits, W)

    def test_biased_input_fails(self, quads):
        src = BernoulliSystem([0, 1], ["2/3", "1/3"], 2)
        rep = verify_pushforward(ornstein_weiss_map(), src, quads, [identity(2)])
        assert not rep.exact_match
        assert rep.distribution == oracle_law(ornstein_weiss_map(), src, [identity(2)])
        assert rep.distribution[((0, 0),)] == Fraction(1, 3)

    def test_identity_map(self):
        src = BernoulliSystem(["x", "y", "z"], ["1/2", "1/3", "1/6"], 2)
        W = [identity(2), w("a"), w("B")]
        rep = verify_pushforward(identity_map(src.alphabet, 2), src, src, W)
        assert rep.exact_match and rep.n_inputs == 27

    def test_budget(self, quads):
        src = BernoulliSystem([0, 1], ["1/2", "1/2"], 2, budget=16)
        with pytest.raises(BudgetExceeded):
            verify_pushforward(ornstein_weiss_map(), src, quads, ball(2, 1).elements)

    def test_alphabet_mismatch(self, bits):
        with pytest.raises(ValueError):
            verify_pushforward(ornstein_weiss_map(), bits, bits, [identity(2)])


class TestEquivariance:
    def test_identity_map(self):
        m = identity_map((0, 1), 2)
        for s in generators(2):
            assert verify_equivariance(m, s, ball(2, 1).elements)

    @pytest.mark.parametrize("s", ["a", "A", "b", "B"])
    def test_ow_exhaustive(self, s):
        assert verify_equivariance(ornstein_weiss_map(), w(s), [identity(2)])

    def test_ow_sampled_on_ball(self):
        ok = verify_equivariance(
            ornstein_weiss_map(), w("a"), ball(2, 1).elements, exhaustive=False, samples=64, rng=random.Random(0)
        )
        assert ok

    def test_broken_rule(self):
        ow = ornstein_weiss_map()
        broken = ShiftedRule(ow.input_alphabet, ow.output_alphabet, ow.dependency, ow.rule)
        assert not verify_equivariance(broken, w("a"), [identity(2)])

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            verify_equivariance(ornstein_weiss_map(), w("a"), ball(2, 2).elements, budget=2**10)


def test_entropy_increases_under_factor(bits, quads):
    assert verify_pushforward(ornstein_weiss_map(), bits, quads, [identity(2)]).exact_match
    assert bernoulli_f(bits) < bernoulli_f(quads)
