"""Finite partial maps from positions to symbols with a cofinite free tail.

Both Silver conditions and the partial assignments driving the chase are
partial functions ``position -> symbol`` whose free set is infinite.  They are
stored as a bound ``B`` plus the assignments below it; every position ``>= B``
is free.  Equality is extensional: two maps with different bounds but the same
assignments are equal.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping


class ArityError(ValueError):
    """A symbol lies outside ``[0, arity)`` or two arities disagree."""


class PartialMap:
    __slots__ = ("arity", "bound", "_items", "_dict")

    def __init__(self, arity: int, bound: int = 0, assignments: Mapping[int, int] | Iterable = ()):
        arity = int(arity)
        if arity < 2:
            raise ArityError(f"arity must be >= 2, got {arity}")
        pairs = dict(assignments.items() if isinstance(assignments, Mapping) else assignments)
        items = tuple(sorted((int(k), int(v)) for k, v in pairs.items()))
        bound = int(bound)
        if items and bound <= items[-1][0]:
            raise ValueError(f"position {items[-1][0]} is not below bound {bound}")
        if bound < 0:
            raise ValueError("bound must be non-negative")
        for pos, val in items:
            if pos < 0:
                raise ValueError(f"negative position {pos}")
            if not 0 <= val < arity:
                raise ArityError(f"symbol {val} at position {pos} outside [0, {arity})")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "_items", items)
        object.__setattr__(self, "_dict", dict(items))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def tight(cls, arity: int, assignments: Mapping[int, int]):
        """Build with the smallest admissible bound."""
        bound = max(assignments, default=-1) + 1
        return cls(arity, bound, assignments)

    @property
    def items(self) -> tuple[tuple[int, int], ...]:
        return self._items

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self._dict)

    def as_dict(self) -> dict[int, int]:
        return dict(self._dict)

    def get(self, pos: int, default=None):
        return self._dict.get(pos, default)

    def __contains__(self, pos: int) -> bool:
        return pos in self._dict

    def __getitem__(self, pos: int) -> int:
        return self._dict[pos]

    def __len__(self) -> int:
        return len(self._items)

    def free_below(self, limit: int | None = None) -> list[int]:
        """Free positions below ``limit`` (default: the bound), ascending."""
        limit = self.bound if limit is None else limit
        return [k for k in range(limit) if k not in self._dict]

    def iter_free(self) -> Iterator[int]:
        """All free positions in increasing order (an infinite iterator)."""
        k = 0
        while True:
            if k not in self._dict:
                yield k
            k += 1

    def with_bound(self, bound: int):
        return type(self)(self.arity, bound, self._items)

    def _key(self):
        return (self.arity, self._items)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__,) + self._key())

    def __repr__(self):
        body = ", ".join(f"{p}:{v}" for p, v in self._items)
        return f"{type(self).__name__}(n={self.arity}, B={self.bound}, {{{body}}})"
