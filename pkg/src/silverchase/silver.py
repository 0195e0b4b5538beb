"""n-Silver conditions: free points, extension by strings, the orders.

A condition is a partial function from the naturals into ``range(n)`` whose
free set is infinite.  We store it as a :class:`~silverchase._pmap.PartialMap`;
everything at or past ``bound`` is free, so the free set is cofinite by
construction and ``free_point`` is total.

The order is inclusion: ``f <= g`` means ``g`` extends ``f`` (larger is
stronger).
"""

from __future__ import annotations

from typing import Sequence

from silverchase._pmap import ArityError, PartialMap

__all__ = [
    "ArityError",
    "ClashError",
    "SilverCondition",
    "free_point",
    "free_points",
    "star",
    "leq",
    "leq_star",
    "compatible",
    "union",
    "empty",
]


class ClashError(ValueError):
    """Two conditions assign different symbols to the same position."""

    def __init__(self, position: int, left: int, right: int):
        super().__init__(f"conditions clash at position {position}: {left} != {right}")
        self.position = position


class SilverCondition(PartialMap):
    """An n-Silver condition in bound representation."""

    __slots__ = ()

    @property
    def value_arity(self) -> int:
        return self.arity


def empty(n: int = 2) -> SilverCondition:
    return SilverCondition(n, 0, {})


def _same_arity(f: PartialMap, g: PartialMap) -> None:
    if f.arity != g.arity:
        raise ArityError(f"arity mismatch: {f.arity} vs {g.arity}")


def free_point(f: SilverCondition, i: int) -> int:
    """Return the ``i``-th free position of ``f`` (0-indexed, increasing)."""
    if i < 0:
        raise ValueError("free point index must be non-negative")
    below = f.free_below()
    if i < len(below):
        return below[i]
    return f.bound + (i - len(below))


def free_points(f: SilverCondition, count: int) -> list[int]:
    """The first ``count`` free positions of ``f``."""
    below = f.free_below()
    if count <= len(below):
        return below[:count]
    return below + list(range(f.bound, f.bound + count - len(below)))


def star(f: SilverCondition, sigma: Sequence[int]) -> SilverCondition:
    """Fill the first ``len(sigma)`` free points of ``f`` with ``sigma``."""
    sigma = tuple(sigma)
    if not sigma:
        return f
    for s in sigma:
        if not 0 <= s < f.arity:
            raise ArityError(f"symbol {s} outside [0, {f.arity})")
    positions = free_points(f, len(sigma))
    new = f.as_dict()
    new.update(zip(positions, sigma))
    return SilverCondition(f.arity, max(f.bound, positions[-1] + 1), new)


def leq(f: SilverCondition, g: SilverCondition) -> bool:
    """``f <= g`` iff ``g`` extends ``f`` as a partial function."""
    _same_arity(f, g)
    return all(g.get(pos) == val for pos, val in f.items)


def leq_star(i: int, f: SilverCondition, g: SilverCondition) -> bool:
    """``f <= g`` and the first ``i // 4`` free points of ``f`` and ``g`` coincide."""
    if i < 0:
        raise ValueError("index must be non-negative")
    if not leq(f, g):
        return False
    frozen = i // 4
    return free_points(f, frozen) == free_points(g, frozen)


def compatible(f: SilverCondition, g: SilverCondition) -> bool:
    _same_arity(f, g)
    small, big = (f, g) if len(f) <= len(g) else (g, f)
    return all(big.get(pos, val) == val for pos, val in small.items)


def union(f: SilverCondition, g: SilverCondition) -> SilverCondition:
    """Least common extension of two compatible conditions."""
    _same_arity(f, g)
    merged = f.as_dict()
    for pos, val in g.items:
        old = merged.setdefault(pos, val)
        if old != val:
            raise ClashError(pos, old, val)
    return SilverCondition(f.arity, max(f.bound, g.bound), merged)
