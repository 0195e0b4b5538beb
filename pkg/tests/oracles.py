"""Definitional re-implementations used as cross-checks.

Nothing here touches numpy or the package's fast paths; each function is the
most literal reading of the definition it checks.
"""

from itertools import product


def free_point_scan(assigned: dict, i: int) -> int:
    """Walk the naturals, counting unassigned positions."""
    seen = 0
    k = 0
    while True:
        if k not in assigned:
            if seen == i:
                return k
            seen += 1
        k += 1


def star_by_hand(assigned: dict, sigma) -> dict:
    out = dict(assigned)
    for i, s in enumerate(sigma):
        out[free_point_scan(assigned, i)] = s
    return out


def image_by_hand(labels: dict, t) -> tuple:
    return tuple(labels[tuple(t[: m + 1])] for m in range(len(t)))


def poset_compatible(leq, x, y) -> bool:
    return any(leq[x][z] and leq[y][z] for z in range(len(leq)))


def predense_by_definition(leq, q, family) -> bool:
    """For every r above q some member of the family has a common upper bound with r."""
    for r in range(len(leq)):
        if leq[q][r] and not any(poset_compatible(leq, r, a) for a in family):
            return False
    return True


def tree_by_hand(labels: dict, arity: int, fixed: dict, depth: int) -> set:
    nodes = set()
    for m in range(depth + 1):
        for t in product(range(arity), repeat=m):
            if all(t[p] == v for p, v in fixed.items() if p < m):
                nodes.add(image_by_hand(labels, t))
    return nodes


def max_successors(nodes) -> int:
    counts = {}
    for v in nodes:
        if v:
            counts[v[:-1]] = counts.get(v[:-1], 0) + 1
    return max(counts.values(), default=0)
