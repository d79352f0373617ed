"""Finite partitions of a system and their entropy calculus.

A :class:`Partition` is stored in a canonical normal form, so a.e.-equality
of partitions is plain ``==``:

* finite backend -- one label per point, ``-1`` on null points, other labels
  numbered by the first point of each atom;
* Bernoulli backend -- a label array of shape ``(q,) * |W|`` over a window
  ``W`` of group elements.  The window is the set of coordinates the labeling
  actually depends on, sorted shortlex, and labels are numbered in order of
  the lexicographically first configuration of each atom.

All atom measures are exact :class:`~fractions.Fraction` values; floating
point only enters through the final logarithms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .freegroup import GroupWord, generators, inverse, multiply, shortlex_key
from .systems import BernoulliSystem, Configuration, FiniteSystem, check_budget

__all__ = [
    "Partition",
    "NullAtomError",
    "UnsupportedBackend",
    "point_partition",
    "trivial_partition",
    "coordinate_partition",
    "join",
    "translate",
    "join_over",
    "power",
    "entropy",
    "conditional_entropy",
    "information",
    "rokhlin_distance",
    "refines",
    "coarsen",
    "is_generating",
    "to_unit",
]

LOG2 = math.log(2)


class NullAtomError(ValueError):
    """The queried point lies in a set of measure zero."""


class UnsupportedBackend(TypeError):
    pass


def _first_appearance(flat: np.ndarray) -> np.ndarray:
    _, first, inv = np.unique(flat, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order), dtype=np.int64)
    return rank[inv.reshape(-1)]


class Partition:
    """A finite partition of a finite or Bernoulli system, in normal form."""

    __slots__ = ("system", "labels", "window", "n_atoms", "_masses", "_hash")

    def __init__(self, system, labels, window: Sequence[GroupWord] | None = None):
        labels = np.asarray(labels, dtype=np.int64)
        if isinstance(system, FiniteSystem):
            if window is not None:
                raise ValueError("finite-system partitions take no window")
            if labels.shape != (len(system),):
                raise ValueError(f"expected {len(system)} labels, got shape {labels.shape}")
            out = np.full(len(system), -1, dtype=np.int64)
            pos = system.positive
            out[pos] = _first_appearance(labels[pos])
            n_atoms = int(out.max()) + 1
        elif isinstance(system, BernoulliSystem):
            window = tuple(window or ())
            if len(set(window)) != len(window):
                raise ValueError("window contains repeated group elements")
            if labels.shape != (system.q,) * len(window):
                raise ValueError(f"label array shape {labels.shape} does not fit window of size {len(window)}")
            order = sorted(range(len(window)), key=lambda i: shortlex_key(window[i]))
            labels = labels.transpose(order)
            window = tuple(window[i] for i in order)
            keep = []
            for axis in range(labels.ndim):
                first = labels.take([0], axis=axis)
                if not np.array_equal(np.broadcast_to(first, labels.shape), labels):
                    keep.append(axis)
            index = tuple(slice(None) if axis in keep else 0 for axis in range(labels.ndim))
            labels = np.array(labels[index], dtype=np.int64)
            window = tuple(window[a] for a in keep)
            out = _first_appearance(labels.reshape(-1)).reshape(labels.shape)
            n_atoms = int(out.max()) + 1
        else:
            raise TypeError(f"not a system: {system!r}")
        out.setflags(write=False)
        self.system = system
        self.labels = out
        self.window = window
        self.n_atoms = n_atoms
        self._masses = None
        self._hash = None

    @property
    def is_bernoulli(self) -> bool:
        return self.window is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.system is other.system
            and self.window == other.window
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.system), self.window, self.labels.tobytes()))
        return self._hash

    def __len__(self) -> int:
        return self.n_atoms

    def __repr__(self) -> str:
        if self.is_bernoulli:
            return f"Partition(atoms={self.n_atoms}, window=[{', '.join(map(str, self.window))}])"
        return f"Partition({self.labels.tolist()})"

    def masses(self) -> tuple[Fraction, ...]:
        """Exact measure of each atom, indexed by label."""
        if self._masses is None:
            _, m = self.system.masses_by_key(self.labels)
            self._masses = tuple(m)
        return self._masses

    def atoms(self) -> list[tuple[int, ...]]:
        """Point indices of each atom (finite backend)."""
        if self.is_bernoulli:
            raise UnsupportedBackend("atoms() lists points; use labels for Bernoulli partitions")
        out: list[list[int]] = [[] for _ in range(self.n_atoms)]
        for p, l in enumerate(self.labels.tolist()):
            if l >= 0:
                out[l].append(p)
        return [tuple(a) for a in out]

    def label_of(self, x) -> int:
        """Label of the atom containing a point index or a configuration."""
        if not self.is_bernoulli:
            label = int(self.labels[x])
            if label < 0:
                raise NullAtomError(f"point {x} has weight zero")
            return label
        if not isinstance(x, Configuration):
            raise TypeError("Bernoulli partitions are evaluated on a Configuration")
        idx = []
        for w in self.window:
            if w not in x.values:
                raise ValueError(f"configuration does not cover window element {w}")
            try:
                idx.append(self.system.support_index(x.values[w]))
            except ValueError as exc:
                raise NullAtomError(str(exc)) from None
        return int(self.labels[tuple(idx)])

    @classmethod
    def from_labels(cls, system: FiniteSystem, labels: Sequence[Hashable]) -> "Partition":
        """Finite partition from arbitrary hashable per-point labels."""
        codes: dict[Hashable, int] = {}
        arr = [codes.setdefault(l, len(codes)) for l in labels]
        return cls(system, np.array(arr, dtype=np.int64))

    @classmethod
    def from_function(
        cls,
        system: BernoulliSystem,
        window: Sequence[GroupWord],
        rule: Callable[..., Hashable] | Mapping[tuple, Hashable],
    ) -> "Partition":
        """Bernoulli partition labelling each window configuration.

        ``rule`` maps a tuple of symbols (in the order of ``window``) to a
        label; a mapping is accepted in place of a callable.  Only
        configurations of positive measure are consulted.
        """
        window = tuple(window)
        system.check_window(len(window))
        lookup = rule.__getitem__ if isinstance(rule, Mapping) else rule
        syms = system.support_symbols
        codes: dict[Hashable, int] = {}
        shape = (system.q,) * len(window)
        arr = np.empty(shape, dtype=np.int64)
        for idx in np.ndindex(*shape):
            arr[idx] = codes.setdefault(lookup(tuple(syms[i] for i in idx)), len(codes))
        return cls(system, arr, window)

    def table(self) -> dict[tuple, int]:
        """Configuration (support symbols, window order) -> label."""
        if not self.is_bernoulli:
            raise UnsupportedBackend("table() is for Bernoulli partitions")
        syms = self.system.support_symbols
        return {tuple(syms[i] for i in idx): int(self.labels[idx]) for idx in np.ndindex(*self.labels.shape)}


def point_partition(system: FiniteSystem) -> Partition:
    return Partition(system, np.arange(len(system)))


def trivial_partition(system) -> Partition:
    if isinstance(system, FiniteSystem):
        return Partition(system, np.zeros(len(system), dtype=np.int64))
    return Partition(system, np.zeros((), dtype=np.int64), ())


def coordinate_partition(system: BernoulliSystem) -> Partition:
    """The canonical partition by the symbol at the identity coordinate."""
    if not isinstance(system, BernoulliSystem):
        raise UnsupportedBackend("coordinate partitions exist on Bernoulli systems only")
    e = GroupWord(system.rank, ())
    return Partition(system, np.arange(system.q), (e,))


def _same_system(a: Partition, b: Partition) -> None:
    if a.system is not b.system:
        raise ValueError("partitions belong to different systems")


def _expand(p: Partition, window: tuple[GroupWord, ...]) -> np.ndarray:
    members = set(p.window)
    q = p.system.q
    shape = [q if w in members else 1 for w in window]
    return np.broadcast_to(p.labels.reshape(shape), (q,) * len(window))


def _aligned(a: Partition, b: Partition) -> tuple[np.ndarray, np.ndarray, tuple | None]:
    """Both label arrays over a common cell space."""
    _same_system(a, b)
    if not a.is_bernoulli:
        return a.labels, b.labels, None
    window = tuple(sorted(set(a.window) | set(b.window), key=shortlex_key))
    check_budget(a.system.cells(len(window)), a.system.budget)
    return _expand(a, window), _expand(b, window), window


def _pair_keys(a: np.ndarray, b: np.ndarray, nb: int) -> np.ndarray:
    keys = a * nb + b
    if a.ndim == 1 and (a < 0).any():
        keys = np.where(a < 0, -1, keys)
    return keys


def join(a: Partition, b: Partition) -> Partition:
    """Common refinement: atoms are the nonnull intersections A ∩ B."""
    la, lb, window = _aligned(a, b)
    return Partition(a.system, _pair_keys(la, lb, b.n_atoms), window)


def translate(g: GroupWord, p: Partition) -> Partition:
    """The partition g·p whose atoms are the sets gA."""
    system = p.system
    if g.rank != system.rank:
        raise ValueError(f"rank mismatch: word of rank {g.rank}, system of rank {system.rank}")
    if g.is_identity:
        return p
    if not p.is_bernoulli:
        # x lies in gA iff g^-1 x lies in A
        return Partition(system, p.labels[system.permutation(inverse(g))])
    return Partition(system, p.labels, tuple(multiply(g, w) for w in p.window))


def join_over(p: Partition, words: Iterable[GroupWord]) -> Partition:
    """The join of the translates f·p over a finite set of group elements."""
    words = list(words)
    if not words:
        return trivial_partition(p.system)
    out = translate(words[0], p)
    for w in words[1:]:
        out = join(out, translate(w, p))
    return out


def ball_step(p: Partition) -> Partition:
    """p^1 = p ∨ ⋁_{s∈S} s·p; applied n times to p this gives p^n."""
    out = p
    for s in generators(p.system.rank):
        out = join(out, translate(s, p))
    return out


def power(p: Partition, n: int) -> Partition:
    """p^n, the join over the ball B(e, n)."""
    if n < 0:
        raise ValueError("radius must be nonnegative")
    out = p
    for _ in range(n):
        nxt = ball_step(out)
        if nxt == out:
            break
        out = nxt
    return out


def to_unit(value: float, unit: str = "nats") -> float:
    if unit == "nats":
        return value
    if unit == "bits":
        return value / LOG2
    raise ValueError(f"unknown unit {unit!r}")


def _log(m: Fraction) -> float:
    f = float(m)
    if f > 1e-300:
        return math.log(f)
    return math.log(m.numerator) - math.log(m.denominator)


def _h(masses: Iterable[Fraction]) -> float:
    # fsum makes the result independent of atom order
    return math.fsum(-float(m) * _log(m) for m in masses if m > 0)


def entropy(p: Partition, unit: str = "nats") -> float:
    """Shannon entropy of the atom measures, with 0 log 0 = 0."""
    return to_unit(_h(p.masses()), unit)


def _joint_masses(a: Partition, b: Partition) -> dict[tuple[int, int], Fraction]:
    la, lb, _ = _aligned(a, b)
    keys, masses = a.system.masses_by_key(_pair_keys(la, lb, b.n_atoms))
    nb = b.n_atoms
    return {(k // nb, k % nb): m for k, m in zip(keys.tolist(), masses)}


def conditional_entropy(a: Partition, b: Partition, unit: str = "nats") -> float:
    """H(a | b) = Σ_B μ(B) Σ_A -μ(A|B) log μ(A|B)."""
    joint = _joint_masses(a, b)
    given: dict[int, Fraction] = {}
    for (_, j), m in joint.items():
        given[j] = given.get(j, Fraction(0)) + m
    terms = []
    for (_, j), m in joint.items():
        ratio = m / given[j]
        terms.append(-float(m) * _log(ratio))
    return to_unit(math.fsum(terms), unit)


def information(a: Partition, b: Partition, x, unit: str = "nats") -> float:
    """Conditional information I(a|b)(x) = -log μ(A_x ∩ B_x) / μ(B_x)."""
    _same_system(a, b)
    i, j = a.label_of(x), b.label_of(x)
    joint = _joint_masses(a, b)
    given = sum((m for (_, jj), m in joint.items() if jj == j), Fraction(0))
    return to_unit(-_log(joint[(i, j)] / given), unit)


def rokhlin_distance(a: Partition, b: Partition, unit: str = "nats") -> float:
    """d(a, b) = H(a|b) + H(b|a)."""
    return conditional_entropy(a, b, unit) + conditional_entropy(b, a, unit)


def refines(a: Partition, b: Partition) -> bool:
    """True iff every atom of ``a`` lies (a.e.) inside one atom of ``b``."""
    la, lb, _ = _aligned(a, b)
    keys = _pair_keys(la, lb, b.n_atoms).reshape(-1)
    keys = keys[keys >= 0]
    return len(np.unique(keys)) == a.n_atoms


def coarsen(p: Partition, merge: Mapping[int, Hashable]) -> Partition:
    """Relabel atoms through ``merge``; atoms sharing a new label are fused."""
    missing = [l for l in range(p.n_atoms) if l not in merge]
    if missing:
        raise ValueError(f"merge map is not total: missing labels {missing}")
    codes: dict[Hashable, int] = {}
    lut = np.array([codes.setdefault(merge[l], len(codes)) for l in range(p.n_atoms)], dtype=np.int64)
    if p.is_bernoulli:
        return Partition(p.system, lut[p.labels], p.window)
    return Partition(p.system, np.where(p.labels < 0, -1, lut[np.maximum(p.labels, 0)]))


def merge_map(fine: Partition, coarse: Partition) -> dict[int, int]:
    """The label map witnessing that ``coarse`` is a coarsening of ``fine``."""
    la, lb, _ = _aligned(fine, coarse)
    la, lb = la.reshape(-1), lb.reshape(-1)
    mask = la >= 0
    out: dict[int, int] = {}
    for i, j in zip(la[mask].tolist(), lb[mask].tolist()):
        if out.setdefault(i, j) != j:
            raise ValueError("partition is not a coarsening")
    return out


def is_generating(p: Partition, system=None) -> tuple[bool, int | None]:
    """Whether the translates of ``p`` separate the points of positive weight.

    Returns ``(generating, n)`` with ``n`` the least radius at which ``p^n``
    is the point partition.  On a Bernoulli system only the canonical
    coordinate partition can be certified (it is generating, with no finite
    witness radius); anything else raises :class:`UnsupportedBackend`.
    """
    system = system if system is not None else p.system
    if system is not p.system:
        raise ValueError("partition belongs to a different system")
    if isinstance(system, BernoulliSystem):
        if p == coordinate_partition(system):
            return True, None
        raise UnsupportedBackend("generating check is only decided for the canonical Bernoulli partition")
    target = int(system.positive.sum())
    cur, n = p, 0
    while True:
        if cur.n_atoms == target:
            return True, n
        nxt = ball_step(cur)
        if nxt == cur:
            return False, None
        cur, n = nxt, n + 1
