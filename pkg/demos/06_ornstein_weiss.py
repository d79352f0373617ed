"""
A factor map that raises entropy
================================

x ↦ (x(g) + x(ga), x(g) + x(gb)) sends fair coin flips on F_2 to uniform
pairs.  The pushforward is checked exactly on the unit ball.
"""

from freeinv.factor import input_window, ornstein_weiss_map, verify_equivariance, verify_pushforward
from freeinv.finvariant import bernoulli_f
from freeinv.freegroup import ball, parse_word
from freeinv.systems import BernoulliSystem

ow = ornstein_weiss_map()
bits = BernoulliSystem([0, 1], ["1/2", "1/2"], rank=2)
pairs = BernoulliSystem(ow.output_alphabet, ["1/4"] * 4, rank=2)

W = ball(2, 1).elements
print("inputs live on", [str(g) for g in input_window(ow, W)])

report = verify_pushforward(ow, bits, pairs, W)
print(report.n_inputs, "inputs,", len(report.distribution), "output cells, exact:", report.exact_match)

e = [parse_word("1", 2)]
print("equivariant:", verify_equivariance(ow, parse_word("a", 2), e), verify_equivariance(ow, parse_word("b", 2), e))

# the source has less entropy than its image
print(bernoulli_f(bits), "<", bernoulli_f(pairs))
