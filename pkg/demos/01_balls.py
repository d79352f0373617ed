"""
Balls in the free group
=======================

Reduced words up to a given length, in shortlex order, against the
closed-form counts.
"""

from freeinv.freegroup import ball, ball_size, ball_union_size, parse_word

# the unit ball of F_2: e, a, a^-1, b, b^-1 (capitals are inverses)
print([str(w) for w in ball(2, 1)])

# sizes grow like 3^n; the BFS count always matches the formula
for n in range(7):
    print(n, len(ball(2, n).elements), ball_size(2, n))

# a ball and its translate by a generator overlap heavily
a = parse_word("a", 2)
b1 = set(ball(2, 1))
print(len(b1 | {a * g for g in b1}), ball_union_size(2, 1))

# rank one is the integers: 2n + 1 words
print([len(ball(1, n).elements) for n in range(5)])
