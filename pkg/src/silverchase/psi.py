"""Labelings of finite strings and the trees they induce.

A :class:`PsiTable` labels every nonempty string of length at most ``horizon``
over ``range(arity)`` with a non-negative integer.  From it we derive the
levelwise relabeling :func:`psi_star`, the witness sets of a partial
assignment and their images, the localization trees.

Strings are plain tuples of ints throughout.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import product
from typing import Iterable, Iterator, Mapping

import numpy as np

from silverchase._pmap import ArityError, PartialMap

__all__ = [
    "PsiDomainError",
    "PsiTable",
    "PartialAssignment",
    "LabeledTree",
    "psi_star",
    "witness_set",
    "maximal_witnesses",
    "localization_tree",
    "equiv_star",
    "equiv_horizon",
    "is_k_ary",
    "branching_profile",
    "strings_of_length",
]

LABEL_MAX = 2**63 - 1


class PsiDomainError(ValueError):
    """A string lies past the table's horizon or outside its alphabet."""


def strings_of_length(arity: int, m: int) -> Iterator[tuple[int, ...]]:
    """All strings of length ``m`` in lexicographic order."""
    return product(range(arity), repeat=m)


class PsiTable:
    """Total labeling of nonempty strings up to a horizon.

    ``levels[m - 1]`` is an int64 array of length ``arity**m``; the label of
    ``t`` sits at the base-``arity`` value of ``t`` read most significant
    first, so array order is lexicographic order.
    """

    __slots__ = ("arity", "horizon", "levels")

    def __init__(self, arity: int, horizon: int, levels: Iterable):
        if arity < 2:
            raise ArityError(f"arity must be >= 2, got {arity}")
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        arrs = []
        for m, lev in enumerate(levels, start=1):
            arr = np.array(lev, dtype=np.int64).reshape(-1)
            if arr.shape != (arity**m,):
                raise ValueError(f"level {m} needs {arity**m} labels, got {arr.size}")
            if (arr < 0).any():
                raise ValueError(f"negative label at level {m}")
            arr.setflags(write=False)
            arrs.append(arr)
        if len(arrs) != horizon:
            raise ValueError(f"expected {horizon} levels, got {len(arrs)}")
        self.arity = int(arity)
        self.horizon = int(horizon)
        self.levels = tuple(arrs)

    @classmethod
    def from_mapping(cls, arity: int, horizon: int, labels: Mapping[tuple, int]) -> "PsiTable":
        """Build from ``{string: label}``; every string of length 1..horizon is required."""
        levels = []
        for m in range(1, horizon + 1):
            lev = []
            for t in strings_of_length(arity, m):
                if t not in labels:
                    raise PsiDomainError(f"missing label for {t}")
                lev.append(labels[t])
            levels.append(lev)
        extra = set(labels) - {t for m in range(1, horizon + 1) for t in strings_of_length(arity, m)}
        if extra:
            raise PsiDomainError(f"labels outside the table: {sorted(extra)[:3]}")
        return cls(arity, horizon, levels)

    @classmethod
    def from_function(cls, arity: int, horizon: int, fn) -> "PsiTable":
        return cls(arity, horizon, [[fn(t) for t in strings_of_length(arity, m)]
                                    for m in range(1, horizon + 1)])

    def index(self, t: tuple[int, ...]) -> int:
        idx = 0
        for s in t:
            idx = idx * self.arity + s
        return idx

    def _check(self, t: tuple[int, ...]) -> None:
        if len(t) > self.horizon:
            raise PsiDomainError(f"string of length {len(t)} beyond horizon {self.horizon}")
        for s in t:
            if not 0 <= s < self.arity:
                raise PsiDomainError(f"symbol {s} outside alphabet of size {self.arity}")

    def __call__(self, t: tuple[int, ...]) -> int:
        t = tuple(t)
        if not t:
            raise PsiDomainError("the empty string carries no label")
        self._check(t)
        return int(self.levels[len(t) - 1][self.index(t)])

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for m, lev in enumerate(self.levels, start=1):
            for t, lab in zip(strings_of_length(self.arity, m), lev.tolist()):
                yield t, lab

    def __eq__(self, other):
        if not isinstance(other, PsiTable):
            return NotImplemented
        return (self.arity == other.arity and self.horizon == other.horizon
                and all(np.array_equal(a, b) for a, b in zip(self.levels, other.levels)))

    def __hash__(self):
        return hash((self.arity, self.horizon, tuple(lev.tobytes() for lev in self.levels)))

    def __repr__(self):
        return f"PsiTable(a={self.arity}, D={self.horizon})"


class PartialAssignment(PartialMap):
    """A partial map from positions to symbols; positions ``>= bound`` are free."""

    __slots__ = ()

    def agrees_with(self, t: tuple[int, ...]) -> bool:
        """True iff ``t`` matches the assignment on every assigned position below ``len(t)``."""
        n = len(t)
        return all(t[p] == v for p, v in self.items if p < n)

    def extend(self, assignments: Mapping[int, int], bound: int | None = None) -> "PartialAssignment":
        merged = self.as_dict()
        for p, v in assignments.items():
            if merged.setdefault(p, v) != v:
                raise ValueError(f"conflicting value at position {p}")
        new_bound = max(self.bound, max(assignments, default=-1) + 1)
        if bound is not None:
            new_bound = max(new_bound, bound)
        return PartialAssignment(self.arity, new_bound, merged)


def psi_star(psi: PsiTable, t) -> tuple[int, ...]:
    """Levelwise relabeling: entry ``m`` is the label of the prefix of length ``m + 1``."""
    t = tuple(t)
    psi._check(t)
    a = psi.arity
    out = []
    idx = 0
    for m, s in enumerate(t):
        idx = idx * a + s
        out.append(int(psi.levels[m][idx]))
    return tuple(out)


def maximal_witnesses(xi: PartialAssignment, length: int) -> list[tuple[int, ...]]:
    """Strings of exactly ``length`` agreeing with ``xi``, in lexicographic order."""
    choices = [(xi[k],) if k in xi else tuple(range(xi.arity)) for k in range(length)]
    return list(product(*choices))


def witness_set(xi: PartialAssignment, ell: int) -> set[tuple[int, ...]]:
    """All strings of length ``<= ell`` agreeing with ``xi`` below their length."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    return {t[:m] for t in maximal_witnesses(xi, ell) for m in range(ell + 1)}


class LabeledTree(frozenset):
    """A prefix-closed finite set of label strings containing the root."""

    def __new__(cls, nodes: Iterable = ((),)):
        nodes = frozenset(tuple(v) for v in nodes)
        if () not in nodes:
            raise ValueError("a tree must contain the empty string")
        for v in nodes:
            if v and v[:-1] not in nodes:
                raise ValueError(f"not prefix-closed: {v} lacks its parent")
        return super().__new__(cls, nodes)

    def successors(self, node) -> list[tuple[int, ...]]:
        node = tuple(node)
        return sorted(v for v in self if len(v) == len(node) + 1 and v[:-1] == node)

    def successor_counts(self) -> dict[tuple[int, ...], int]:
        counts: dict[tuple[int, ...], int] = defaultdict(int)
        for v in self:
            if v:
                counts[v[:-1]] += 1
        return dict(counts)

    def maximal(self) -> list[tuple[int, ...]]:
        counts = self.successor_counts()
        return sorted((v for v in self if v not in counts), key=lambda v: (len(v), v))

    def depth(self) -> int:
        return max(len(v) for v in self)

    def sorted_nodes(self) -> list[tuple[int, ...]]:
        return sorted(self, key=lambda v: (len(v), v))

    def __repr__(self):
        return f"LabeledTree({self.sorted_nodes()})"


def localization_tree(psi: PsiTable, xi: PartialAssignment, ell: int) -> LabeledTree:
    """Image of the witness set of ``xi`` up to length ``ell`` under :func:`psi_star`."""
    if ell > psi.horizon:
        raise PsiDomainError(f"depth {ell} beyond horizon {psi.horizon}")
    if xi.arity != psi.arity:
        raise ArityError(f"assignment arity {xi.arity} != table arity {psi.arity}")
    nodes = set()
    for t in maximal_witnesses(xi, ell):
        img = psi_star(psi, t)
        nodes.update(img[:m] for m in range(ell + 1))
    return LabeledTree(nodes)


def equiv_star(psi: PsiTable, s, t) -> bool:
    """``s ~ t``: equal relabelings (so equal lengths)."""
    return psi_star(psi, s) == psi_star(psi, t)


def equiv_horizon(psi: PsiTable, s, t) -> bool:
    """``s`` and ``t`` get equal labels under every common extension that fits the table.

    The empty extension is included when both strings are nonempty.
    """
    s, t = tuple(s), tuple(t)
    psi._check(s)
    psi._check(t)
    if bool(s) != bool(t):
        raise PsiDomainError("one string is empty and the other is not")
    room = psi.horizon - max(len(s), len(t))
    a = psi.arity
    ls, lt = len(s), len(t)
    base_s, base_t = psi.index(s), psi.index(t)
    for k in range(0 if s else 1, room + 1):
        # labels of all extensions by k symbols form a contiguous block
        ext_s = psi.levels[ls + k - 1][base_s * a**k:(base_s + 1) * a**k]
        ext_t = psi.levels[lt + k - 1][base_t * a**k:(base_t + 1) * a**k]
        if not np.array_equal(ext_s, ext_t):
            return False
    return True


def is_k_ary(tree: LabeledTree, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be >= 1")
    return all(c <= k for c in tree.successor_counts().values())


def branching_profile(tree: LabeledTree) -> dict[int, int]:
    """Largest successor count per level, for levels with at least one inner node."""
    prof: dict[int, int] = {}
    for node, c in tree.successor_counts().items():
        prof[len(node)] = max(prof.get(len(node), 0), c)
    return dict(sorted(prof.items()))
