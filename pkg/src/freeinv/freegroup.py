"""Reduced words in the free group of rank r, word metric and Cayley balls.

Letters are signed generator indices: ``+i`` is the generator s_i and ``-i``
its inverse, for ``1 <= i <= r``.  Words are always stored reduced, so two
words are equal exactly when their letter tuples agree.

Words serialize to strings over ``a..z`` (generators) and ``A..Z``
(inverses); the identity is written ``"1"``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "GroupWord",
    "Ball",
    "BallTooLarge",
    "identity",
    "generators",
    "reduce",
    "multiply",
    "inverse",
    "word_length",
    "word_distance",
    "parse_word",
    "ball",
    "ball_size",
    "ball_union_size",
    "is_connected",
    "shortlex_key",
]

DEFAULT_BALL_LIMIT = 1_000_000


class BallTooLarge(ValueError):
    pass


def _letter_key(letter: int) -> int:
    # s1 < s1^-1 < s2 < s2^-1 < ...
    return 2 * (abs(letter) - 1) + (letter < 0)


@dataclass(frozen=True)
class GroupWord:
    """A reduced word in the free group of the given rank.

    Construct through :func:`reduce` or :func:`parse_word`; the constructor
    itself assumes ``letters`` is already reduced and in range.
    """

    rank: int
    letters: tuple[int, ...] = ()
    _key: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (len(self.letters), tuple(_letter_key(l) for l in self.letters)))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return multiply(self, other)

    def __invert__(self) -> "GroupWord":
        return inverse(self)

    def __len__(self) -> int:
        return len(self.letters)

    def __lt__(self, other: "GroupWord") -> bool:
        return self._key < other._key

    def __le__(self, other: "GroupWord") -> bool:
        return self._key <= other._key

    def __gt__(self, other: "GroupWord") -> bool:
        return self._key > other._key

    def __ge__(self, other: "GroupWord") -> bool:
        return self._key >= other._key

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(
            chr(ord("a") + l - 1) if l > 0 else chr(ord("A") - l - 1) for l in self.letters
        )

    def __repr__(self) -> str:
        return f"GroupWord({str(self)!r}, rank={self.rank})"


def shortlex_key(word: GroupWord) -> tuple:
    return word._key


def _check_rank(rank: int) -> None:
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")


def identity(rank: int) -> GroupWord:
    _check_rank(rank)
    return GroupWord(rank, ())


def generators(rank: int) -> tuple[GroupWord, ...]:
    """The symmetric generating set S in shortlex order (|S| = 2r)."""
    _check_rank(rank)
    return tuple(GroupWord(rank, (sign * i,)) for i in range(1, rank + 1) for sign in (1, -1))


def reduce(letters: Iterable[int], rank: int) -> GroupWord:
    """Freely reduce a raw letter sequence."""
    _check_rank(rank)
    stack: list[int] = []
    for letter in letters:
        letter = int(letter)
        if letter == 0 or abs(letter) > rank:
            raise ValueError(f"generator index {letter} out of range 1..{rank}")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return GroupWord(rank, tuple(stack))


def multiply(u: GroupWord, v: GroupWord) -> GroupWord:
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} != {v.rank}")
    a, b = u.letters, v.letters
    k = 0
    while k < len(a) and k < len(b) and a[len(a) - 1 - k] == -b[k]:
        k += 1
    return GroupWord(u.rank, a[: len(a) - k] + b[k:])


def inverse(u: GroupWord) -> GroupWord:
    return GroupWord(u.rank, tuple(-l for l in reversed(u.letters)))


def word_length(u: GroupWord) -> int:
    return len(u.letters)


def word_distance(u: GroupWord, v: GroupWord) -> int:
    """Left-invariant word metric d(u, v) = |u^-1 v|."""
    return len(multiply(inverse(u), v).letters)


def parse_word(text: str, rank: int) -> GroupWord:
    """Parse ``"aB"``-style notation; ``"1"`` or ``""`` is the identity."""
    text = text.strip()
    if text in ("", "1", "e"):
        return identity(rank)
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"invalid letter {ch!r} in word {text!r}")
    return reduce(letters, rank)


def ball_size(rank: int, n: int) -> int:
    """Closed form for |B(e, n)|."""
    _check_rank(rank)
    if n < 0:
        raise ValueError("radius must be nonnegative")
    if rank == 1:
        return 2 * n + 1
    s = 2 * rank
    return 1 + s * ((s - 1) ** n - 1) // (s - 2)


def ball_union_size(rank: int, n: int, s: GroupWord | None = None) -> int:
    """Closed form for |B(e, n) ∪ B(s, n)|, the same for every s in S."""
    _check_rank(rank)
    if n < 0:
        raise ValueError("radius must be nonnegative")
    if s is not None and (s.rank != rank or len(s.letters) != 1):
        raise ValueError(f"{s!r} is not a generator of the rank-{rank} free group")
    if rank == 1:
        return 2 * n + 2
    k = 2 * rank
    return 2 * ((k - 1) ** (n + 1) - 1) // (k - 2)


@dataclass(frozen=True)
class Ball:
    center: GroupWord
    radius: int
    elements: tuple[GroupWord, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, w: GroupWord) -> bool:
        return w in self._members

    def __iter__(self):
        return iter(self.elements)

    @property
    def _members(self) -> frozenset:
        members = self.__dict__.get("_members_cache")
        if members is None:
            members = frozenset(self.elements)
            object.__setattr__(self, "_members_cache", members)
        return members


def ball(rank: int, n: int, center: GroupWord | None = None, limit: int = DEFAULT_BALL_LIMIT) -> Ball:
    """All group elements within word distance ``n`` of ``center``.

    Enumerated breadth first over reduced words; for ``center = e`` the
    elements come out in shortlex order.  ``center * B(e, n)`` is returned
    sorted shortlex as well.
    """
    _check_rank(rank)
    if n < 0:
        raise ValueError("radius must be nonnegative")
    predicted = ball_size(rank, n)
    if predicted > limit:
        raise BallTooLarge(f"|B(e,{n})| = {predicted} exceeds limit {limit}")
    gens = [g.letters[0] for g in generators(rank)]
    elements = [()]
    frontier = [()]
    for _ in range(n):
        nxt = []
        for w in frontier:
            last = w[-1] if w else 0
            for l in gens:
                if l != -last:
                    nxt.append(w + (l,))
        elements.extend(nxt)
        frontier = nxt
    words = tuple(GroupWord(rank, w) for w in elements)
    if center is None or center.is_identity:
        return Ball(identity(rank), n, words)
    if center.rank != rank:
        raise ValueError(f"rank mismatch: {center.rank} != {rank}")
    return Ball(center, n, tuple(sorted(center * w for w in words)))


def is_connected(words: Iterable[GroupWord]) -> tuple[bool, dict[GroupWord, GroupWord | None] | None]:
    """Connectivity of the induced subgraph of the Cayley graph.

    Edges join g and gs for s in S.  On success also returns a BFS spanning
    tree as a child -> parent map; the root (``e`` if present, otherwise the
    shortlex-least element) maps to ``None``.
    """
    members = set(words)
    if not members:
        raise ValueError("set of words must be nonempty")
    rank = next(iter(members)).rank
    root = identity(rank)
    if root not in members:
        root = min(members)
    gens = generators(rank)
    parent: dict[GroupWord, GroupWord | None] = {root: None}
    queue = deque([root])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h in members and h not in parent:
                parent[h] = g
                queue.append(h)
    if len(parent) != len(members):
        return False, None
    return True, parent


def words_from_strings(texts: Sequence[str], rank: int) -> list[GroupWord]:
    return [parse_word(t, rank) for t in texts]
