"""The chase: freeing coordinates of a binary labeling until its tree is binary.

Given a table ``psi`` on binary strings, the chase builds frontiers
``0 = N_0 < N_1 < ...`` and assignments ``xi_m`` defined on
``[0, N_m)`` minus the earlier frontiers, so that the localization tree of
``xi_m`` up to depth ``N_m`` is binary.  At each stage one representative of
every ``~``-class of maximal witnesses is processed in turn: either some
extension makes its two one-step successors ``≡``-equivalent (the equalized
branch) or some extension tells their relabelings apart (the separated
branch).

Everything here works at the table's horizon ``D``; ``≡`` is the truncated
:func:`~silverchase.psi.equiv_horizon`.  When neither branch can be certified
within the horizon the run stops with status ``horizon_exhausted``.

Extension searches run in a fixed order: the new frontier ascending, then the
new values as a little-endian binary counter (lowest position flips first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Mapping, Sequence

import numpy as np

from silverchase._pmap import ArityError
from silverchase.psi import (
    LabeledTree,
    PartialAssignment,
    PsiTable,
    equiv_horizon,
    equiv_star,
    is_k_ary,
    localization_tree,
    maximal_witnesses,
    psi_star,
)

__all__ = [
    "EQUALIZED",
    "SEPARATED",
    "UnsupportedArityError",
    "InfeasibleParameters",
    "RepresentativeRecord",
    "ChaseStage",
    "ChaseStatus",
    "ChaseResult",
    "chase",
    "select_representatives",
    "find_equalizing_extension",
    "find_separating_extension",
    "stage_violations",
    "oracle_search",
    "gen_psi",
    "PSI_KINDS",
]

EQUALIZED = "equalized"
SEPARATED = "separated"
PSI_KINDS = ("random", "level_injective", "constant", "collapsing")


class UnsupportedArityError(ArityError):
    pass


class InfeasibleParameters(ValueError):
    pass


@dataclass(frozen=True)
class RepresentativeRecord:
    """Outcome of processing one representative ``d``.

    ``frontier`` and ``extension`` are the running ``N^{i+1}`` and the values
    on ``[N_m + 1, N^{i+1})`` after this representative.
    """

    representative: tuple[int, ...]
    branch: str
    frontier: int
    extension: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ChaseStage:
    """Stage ``m``: its frontier, assignment, and the work done to extend it.

    ``representatives`` and ``records`` describe the attempt to build stage
    ``m + 1`` from this one; both are empty for the last stage of a completed
    run.  A run that ran out of horizon keeps the partial records here.
    """

    index: int
    frontier: int
    assignment: PartialAssignment
    representatives: tuple[tuple[int, ...], ...] = ()
    records: tuple[RepresentativeRecord, ...] = ()

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(self.assignment.free_below(self.frontier))

    def tree(self, psi: PsiTable) -> LabeledTree:
        return localization_tree(psi, self.assignment, self.frontier)


@dataclass(frozen=True)
class ChaseStatus:
    kind: str  # "completed" | "horizon_exhausted"
    reason: str
    stage: int | None = None
    representative: tuple[int, ...] | None = None

    @property
    def completed(self) -> bool:
        return self.kind == "completed"


@dataclass(frozen=True)
class ChaseResult:
    psi: PsiTable
    max_stages: int
    stages: tuple[ChaseStage, ...]
    status: ChaseStatus
    final_tree: LabeledTree = field(compare=True)

    @property
    def final(self) -> ChaseStage:
        return self.stages[-1]

    @property
    def final_assignment(self) -> PartialAssignment:
        return self.final.assignment


def select_representatives(psi: PsiTable, witnesses: Sequence) -> list[tuple[int, ...]]:
    """Lexicographically least member of each ``~``-class, sorted."""
    least: dict[tuple[int, ...], tuple[int, ...]] = {}
    for w in witnesses:
        w = tuple(w)
        img = psi_star(psi, w)
        if img not in least or w < least[img]:
            least[img] = w
    return sorted(least.values())


def _extensions(floor: Mapping[int, int], base: int, horizon: int) -> Iterator[tuple[int, dict]]:
    """Candidate ``(N, values)`` in canonical order, each extending ``floor``."""
    for N in range(base + 1, horizon + 1):
        width = N - base
        for counter in product((0, 1), repeat=width):
            vals = dict(floor)
            # reversed so the lowest new position flips fastest
            vals.update(zip(range(base, N), reversed(counter)))
            yield N, vals


def _tail(d: tuple[int, ...], vals: Mapping[int, int], N: int) -> tuple[int, ...]:
    return tuple(vals[k] for k in range(len(d) + 1, N))


def find_equalizing_extension(psi: PsiTable, d, floor: Mapping[int, int], base: int):
    """First ``(N, xi)`` with ``d+0+xi ≡ d+1+xi`` at the horizon, or ``None``.

    ``floor`` is total on ``[len(d) + 1, base)``; candidates have ``base < N <= D``.
    """
    d = tuple(d)
    for N, vals in _extensions(floor, base, psi.horizon):
        tail = _tail(d, vals, N)
        if equiv_horizon(psi, d + (0,) + tail, d + (1,) + tail):
            return N, vals
    return None


def find_separating_extension(psi: PsiTable, d, floor: Mapping[int, int], base: int):
    """First ``(N, xi)`` whose two branches ``d+0+xi``, ``d+1+xi`` relabel differently."""
    d = tuple(d)
    for N, vals in _extensions(floor, base, psi.horizon):
        tail = _tail(d, vals, N)
        if not equiv_star(psi, d + (0,) + tail, d + (1,) + tail):
            return N, vals
    return None


def chase(psi: PsiTable, max_stages: int) -> ChaseResult:
    """Run the chase for at most ``max_stages`` stages.

    A stage is attempted only when ``N_m + 2 <= D``.  Raises
    :class:`UnsupportedArityError` for non-binary tables.
    """
    if psi.arity != 2:
        raise UnsupportedArityError(f"the chase is defined for binary tables, got arity {psi.arity}")
    if max_stages < 0:
        raise ValueError("max_stages must be non-negative")

    D = psi.horizon
    N = 0
    xi = PartialAssignment(2, 0, {})
    stages: list[ChaseStage] = []
    m = 0
    while True:
        if m >= max_stages:
            stages.append(ChaseStage(m, N, xi))
            status = ChaseStatus("completed", "max_stages")
            break
        if N + 2 > D:
            stages.append(ChaseStage(m, N, xi))
            status = ChaseStatus("completed", "horizon")
            break

        delta = select_representatives(psi, maximal_witnesses(xi, N))
        floor: dict[int, int] = {}
        inner = N + 1
        records = []
        failed = None
        for d in delta:
            hit = find_equalizing_extension(psi, d, floor, inner)
            branch = EQUALIZED
            if hit is None:
                hit = find_separating_extension(psi, d, floor, inner)
                branch = SEPARATED
            if hit is None:
                failed = d
                break
            inner, floor = hit
            records.append(RepresentativeRecord(d, branch, inner, tuple(sorted(floor.items()))))

        stages.append(ChaseStage(m, N, xi, tuple(delta), tuple(records)))
        if failed is not None:
            reason = (f"no equalizing or separating extension of {failed} "
                      f"above frontier {inner} within horizon {D}")
            status = ChaseStatus("horizon_exhausted", reason, m + 1, failed)
            break
        xi = xi.extend(floor, bound=inner)
        N = inner
        m += 1

    last = stages[-1]
    return ChaseResult(psi, max_stages, tuple(stages), status,
                       localization_tree(psi, last.assignment, last.frontier))


def stage_violations(psi: PsiTable, stage: ChaseStage, previous: Sequence[int] | None = None) -> list[str]:
    """Check one stage against the construction's invariants.

    ``previous`` is the list of earlier frontiers; when given, the free set
    below ``N_m`` must equal it exactly.
    """
    out = []
    N, xi = stage.frontier, stage.assignment
    if previous is not None and list(stage.free) != list(previous):
        out.append(f"stage {stage.index}: free positions {stage.free} != frontiers {list(previous)}")
    if not is_k_ary(localization_tree(psi, xi, N), 2):
        out.append(f"stage {stage.index}: localization tree is not binary")
    by_image: dict[tuple, list] = {}
    for w in maximal_witnesses(xi, N):
        by_image.setdefault(psi_star(psi, w), []).append(w)
    for group in by_image.values():
        for s, t in combinations(group, 2):
            if not equiv_horizon(psi, s, t):
                out.append(f"stage {stage.index}: {s} ~ {t} but not ≡ at horizon")
    return out


def oracle_search(psi: PsiTable, depth: int, free_count: int, k: int) -> list[PartialAssignment]:
    """Every assignment on ``[0, depth)`` with exactly ``free_count`` free positions
    whose localization tree at ``depth`` is ``k``-ary.

    Free sets run through combinations in lexicographic order; the values on
    the remaining positions run as a little-endian counter.
    """
    if depth > psi.horizon:
        raise ValueError(f"depth {depth} beyond horizon {psi.horizon}")
    if not 0 <= free_count <= depth:
        raise ValueError("free_count must lie in [0, depth]")
    a = psi.arity
    hits = []
    for free in combinations(range(depth), free_count):
        fixed = [p for p in range(depth) if p not in free]
        for counter in product(range(a), repeat=len(fixed)):
            xi = PartialAssignment(a, depth, dict(zip(fixed, reversed(counter))))
            if is_k_ary(localization_tree(psi, xi, depth), k):
                hits.append(xi)
    return hits


def gen_psi(seed: int, a: int = 2, D: int = 4, label_range: int = 4, kind: str = "random") -> PsiTable:
    """Deterministic test table.

    ``collapsing`` gives one shared label on level 1, pairwise distinct labels
    on level 2, and random labels further down.
    """
    if kind not in PSI_KINDS:
        raise InfeasibleParameters(f"unknown kind {kind!r}; expected one of {PSI_KINDS}")
    if a < 2 or D < 1 or label_range < 1:
        raise InfeasibleParameters("need a >= 2, D >= 1, label_range >= 1")
    if kind == "level_injective" and label_range < a:
        raise InfeasibleParameters(f"level_injective needs label_range >= a ({label_range} < {a})")
    if kind == "collapsing" and D >= 2 and label_range < a * a:
        raise InfeasibleParameters(f"collapsing needs label_range >= a*a ({label_range} < {a * a})")

    rng = np.random.default_rng(seed)
    levels = []
    if kind == "constant":
        c = int(rng.integers(label_range))
        return PsiTable(a, D, [np.full(a**m, c) for m in range(1, D + 1)])
    for m in range(1, D + 1):
        size = a**m
        if kind == "level_injective":
            # each sibling block gets a distinct-label draw
            keys = rng.random((size // a, label_range))
            lev = np.argsort(keys, axis=1)[:, :a].reshape(-1)
        elif kind == "collapsing" and m == 1:
            lev = np.full(size, rng.integers(label_range))
        elif kind == "collapsing" and m == 2:
            lev = rng.choice(label_range, size=size, replace=False)
        else:
            lev = rng.integers(label_range, size=size)
        levels.append(lev)
    return PsiTable(a, D, levels)
