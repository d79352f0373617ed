import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from freeinv.freegroup import ball, identity, multiply, parse_word
from freeinv.systems import (
    BernoulliSystem,
    BudgetExceeded,
    Configuration,
    FiniteSystem,
    InvalidSystemError,
    NonBijectiveError,
    WeightNotPreservedError,
    WeightSumError,
    act,
    as_fraction,
    cylinder_measure,
    translate_window,
)
from freeinv.sampling import random_finite_system, random_word


def w(text, rank=2):
    return parse_word(text, rank)


class TestValidate:
    def test_swap_system_valid(self, swap):
        assert swap.rank == 2 and len(swap) == 2

    def test_weight_sum(self):
        with pytest.raises(WeightSumError):
            FiniteSystem(["1/2", "1/3"], [[0, 1]])

    def test_non_bijective_reports_index(self):
        with pytest.raises(NonBijectiveError) as exc:
            FiniteSystem(["1/2", "1/2"], [[0, 0]])
        assert exc.value.index == (0, 1)

    def test_weight_not_preserved(self):
        with pytest.raises(WeightNotPreservedError) as exc:
            FiniteSystem(["1/3", "2/3"], [[1, 0]])
        assert exc.value.index == (0, 0)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_fraction(0.5)

    def test_bernoulli_checks(self):
        with pytest.raises(WeightSumError):
            BernoulliSystem(["0", "1"], ["1/2", "1/3"], 2)
        with pytest.raises(InvalidSystemError):
            BernoulliSystem([], [], 2)
        with pytest.raises(InvalidSystemError):
            BernoulliSystem(["0", "0"], ["1/2", "1/2"], 2)

    def test_zero_weight_points_allowed(self):
        s = FiniteSystem(["1", "0", "0"], [[0, 2, 1]])
        assert s.positive.tolist() == [True, False, False]


class TestAct:
    def test_examples(self, swap):
        assert act(swap, w("a"), 0) == 1
        assert act(swap, identity(2), 1) == 1
        assert act(swap, w("aa"), 0) == 0

    def test_inverse_letter(self, four_cycle):
        assert act(four_cycle, w("A"), 0) == 3
        assert act(four_cycle, w("aA"), 2) == 2

    def test_group_law_500_triples(self):
        rng = random.Random(11)
        for _ in range(500):
            system = random_finite_system(rng, rng.randint(2, 9), 2)
            g, h = random_word(rng, 2), random_word(rng, 2)
            p = rng.randrange(len(system))
            assert act(system, multiply(g, h), p) == act(system, g, act(system, h, p))
            assert system.permutation(g)[p] == act(system, g, p)


class TestCylinder:
    def test_empty_window(self, coin):
        assert cylinder_measure(coin, Configuration({})) == 1

    def test_uniform(self, coin):
        c = Configuration({identity(2): "0", w("a"): "1"})
        assert cylinder_measure(coin, c) == Fraction(1, 4)

    def test_biased(self, biased):
        c = Configuration({identity(2): "x", w("a"): "x", w("b"): "y"})
        assert cylinder_measure(biased, c) == Fraction(4, 27)

    def test_unknown_symbol(self, coin):
        with pytest.raises(ValueError):
            cylinder_measure(coin, Configuration({identity(2): "z"}))

    def test_all_configurations_sum_to_one(self, biased):
        window = ball(2, 1).elements
        total = sum(
            cylinder_measure(biased, Configuration(dict(zip(window, vals))))
            for vals in itertools.product(biased.alphabet, repeat=len(window))
        )
        assert total == 1


class TestTranslateWindow:
    def test_examples(self):
        c = Configuration({identity(2): "k"})
        assert translate_window(identity(2), c) == c
        assert translate_window(w("a"), c) == Configuration({w("a"): "k"})
        assert translate_window(w("A"), translate_window(w("a"), c)) == c

    def test_preserves_measure_and_composes(self, biased):
        rng = random.Random(5)
        for _ in range(100):
            window = rng.sample(list(ball(2, 2)), rng.randint(0, 6))
            c = Configuration({u: rng.choice(biased.alphabet) for u in window})
            g, h = random_word(rng, 2), random_word(rng, 2)
            assert cylinder_measure(biased, translate_window(g, c)) == cylinder_measure(biased, c)
            assert translate_window(multiply(g, h), c) == translate_window(g, translate_window(h, c))


class TestMasses:
    def test_bernoulli_masses_against_products(self):
        system = BernoulliSystem(["p", "q", "r", "z"], ["1/2", "1/3", "1/6", "0"], 2)
        assert system.q == 3
        rng = np.random.default_rng(0)
        keys = rng.integers(0, 5, size=(3, 3, 3))
        uniq, masses = system.masses_by_key(keys)
        probs = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)]
        for k, m in zip(uniq.tolist(), masses):
            expected = sum(
                (probs[i] * probs[j] * probs[l] for (i, j, l) in np.ndindex(3, 3, 3) if keys[i, j, l] == k),
                Fraction(0),
            )
            assert m == expected

    def test_budget(self):
        s = BernoulliSystem(["0", "1"], ["1/2", "1/2"], 2, budget=16)
        s.check_window(4)
        with pytest.raises(BudgetExceeded):
            s.check_window(5)
