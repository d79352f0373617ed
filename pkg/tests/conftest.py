import itertools
import math
import random
from fractions import Fraction

import pytest

from freeinv.freegroup import reduce
from freeinv.systems import BernoulliSystem, FiniteSystem

LOG2 = math.log(2)


@pytest.fixture
def swap():
    """Two points of weight 1/2, both generators swap them."""
    return FiniteSystem(["1/2", "1/2"], [[1, 0], [1, 0]])


@pytest.fixture
def four_cycle():
    """Uniform 4 points; a is the 4-cycle, b is the identity."""
    return FiniteSystem(["1/4"] * 4, [[1, 2, 3, 0], [0, 1, 2, 3]])


@pytest.fixture
def coin():
    return BernoulliSystem(["0", "1"], ["1/2", "1/2"], 2)


@pytest.fixture
def biased():
    return BernoulliSystem(["x", "y"], ["2/3", "1/3"], 2)


@pytest.fixture
def rng():
    return random.Random(20240611)


def brute_ball(rank, n):
    """Reduce every raw letter string of length <= n; no BFS involved."""
    letters = [i for k in range(1, rank + 1) for i in (k, -k)]
    out = set()
    for length in range(n + 1):
        for raw in itertools.product(letters, repeat=length):
            out.add(reduce(raw, rank))
    return out


def naive_entropy(masses):
    return -sum(float(m) * math.log(float(m)) for m in masses if m > 0)


def finite_atom_masses(p):
    """Atom masses of a finite partition by summing weights point by point."""
    out = {}
    for pt, label in enumerate(p.labels.tolist()):
        if label >= 0:
            out[label] = out.get(label, Fraction(0)) + p.system.weights[pt]
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
