"""Referee for finite truncations of the splitting game between Generic and Antigeneric.

At round ``i`` Generic plays a finite tree ``s_i`` over ``range(n + 1)``, an
enumeration of its maximal nodes, and for each maximal node ``eta`` a
condition ``p[eta]`` which Antigeneric answers with a stronger ``q[eta]``.
Order convention: ``leq(x, y)`` means ``y`` is stronger.

The referee checks a recorded play against the rules and the K-nice shape
constraints, reporting failures under stable rule ids:

==================  =====================================================
``alpha.size``      round 0 has at most ``n`` maximal nodes
``alpha.passthrough`` ``s_j`` is a subtree of ``s_i`` and every maximal node
                    of ``s_i`` strictly extends a maximal node of ``s_j``
``alpha.bound``     ``s_i`` is n-ary and each maximal node of ``s_j`` has
                    between 1 and ``n`` maximal extensions in ``s_i``
``nice.alphabet``   every entry is ``<= n``
``nice.depth``      nodes have length ``<= i + 1``, maximal ones exactly ``i + 1``
``nice.label``      off ``K``: every maximal ``eta`` has ``eta[i] == n``
``nice.split``      on ``K``: ``eta[:i]`` has exactly ``n`` successors
``nice.incompat``   on ``K``: Generic's conditions are pairwise incompatible
``gamma.root``      the root condition is below every ``p[eta]``
``gamma.chain``     earlier answers ``q[nu]``, ``nu`` a maximal proper prefix, are below ``p[eta]``
``gamma.answer``    ``p[eta] <= q[eta]``
==================  =====================================================

Plays are infinite; a transcript holds finitely many rounds and the win
condition is judged over those rounds only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Iterable, Sequence

import numpy as np

from silverchase import silver
from silverchase.silver import SilverCondition

__all__ = [
    "RULE_IDS",
    "GameShapeError",
    "PosetError",
    "UnknownElementError",
    "UndecidableInstance",
    "FinitePoset",
    "BoundedSilver",
    "NiceSet",
    "Round",
    "GameTranscript",
    "RuleFailure",
    "WinVerdict",
    "Verdict",
    "maximal_nodes",
    "check_tree_growth",
    "check_nice",
    "check_condition_rules",
    "predense_above",
    "win_check",
    "validate_transcript",
    "splitting_play",
]

RULE_IDS = (
    "alpha.size",
    "alpha.passthrough",
    "alpha.bound",
    "nice.alphabet",
    "nice.depth",
    "nice.label",
    "nice.split",
    "gamma.root",
    "gamma.chain",
    "gamma.answer",
    "nice.incompat",
)
_RULE_ORDER = {r: k for k, r in enumerate(RULE_IDS)}

# Largest number of free positions enumerated when checking a claimed Silver witness.
MAX_WITNESS_FREE = 18


class GameShapeError(ValueError):
    """Transcript is structurally malformed (not a tree, bad enumeration, ...)."""


class PosetError(ValueError):
    pass


class UnknownElementError(ValueError):
    pass


class UndecidableInstance(TypeError):
    pass


class FinitePoset:
    """Poset on ``range(size)``; ``matrix[x][y]`` is true iff ``x <= y``."""

    kind = "finite"

    def __init__(self, matrix):
        m = np.array(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PosetError(f"order matrix must be square, got shape {m.shape}")
        if not m.diagonal().all():
            raise PosetError("order is not reflexive")
        off = m & m.T
        np.fill_diagonal(off, False)
        if off.any():
            x, y = map(int, np.argwhere(off)[0])
            raise PosetError(f"order is not antisymmetric: {x} <= {y} <= {x}")
        mi = m.astype(np.int64)
        if ((mi @ mi > 0) & ~m).any():
            raise PosetError("order is not transitive")
        m.setflags(write=False)
        self.matrix = m
        self.size = m.shape[0]
        # compat[x, y]: some z lies above both
        self._compat = (mi @ mi.T) > 0

    def elements(self) -> list[int]:
        return list(range(self.size))

    def check(self, x) -> int:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x < self.size:
            raise UnknownElementError(f"{x!r} is not an element of a {self.size}-element poset")
        return int(x)

    def leq(self, x, y) -> bool:
        return bool(self.matrix[self.check(x), self.check(y)])

    def compatible(self, x, y) -> bool:
        return bool(self._compat[self.check(x), self.check(y)])

    def above(self, q) -> list[int]:
        return [int(r) for r in np.flatnonzero(self.matrix[self.check(q)])]

    def relabel(self, perm: Sequence[int]) -> "FinitePoset":
        """Isomorphic copy with element ``x`` renamed ``perm[x]``."""
        inv = np.argsort(perm)
        return FinitePoset(self.matrix[np.ix_(inv, inv)])

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"FinitePoset(size={self.size})"


class BoundedSilver:
    """The n-Silver conditions, ordered by inclusion."""

    kind = "silver"

    def __init__(self, n: int):
        if n < 2:
            raise PosetError("Silver value arity must be >= 2")
        self.n = n

    def check(self, x) -> SilverCondition:
        if not isinstance(x, SilverCondition) or x.arity != self.n:
            raise UnknownElementError(f"{x!r} is not an {self.n}-Silver condition")
        return x

    def leq(self, x, y) -> bool:
        return silver.leq(self.check(x), self.check(y))

    def compatible(self, x, y) -> bool:
        return silver.compatible(self.check(x), self.check(y))

    def __eq__(self, other):
        return isinstance(other, BoundedSilver) and other.n == self.n

    def __hash__(self):
        return hash(("silver", self.n))

    def __repr__(self):
        return f"BoundedSilver(n={self.n})"


@dataclass(frozen=True)
class NiceSet:
    """The set K: an arithmetic progression or an explicit finite set."""

    stride: int | None = None
    offset: int = 0
    members: frozenset[int] | None = None

    def __post_init__(self):
        if (self.stride is None) == (self.members is None):
            raise ValueError("give exactly one of stride or members")
        if self.stride is not None and self.stride < 1:
            raise ValueError("stride must be positive")

    @classmethod
    def progression(cls, stride: int, offset: int = 0) -> "NiceSet":
        return cls(stride=stride, offset=offset)

    @classmethod
    def finite(cls, members: Iterable[int]) -> "NiceSet":
        return cls(members=frozenset(int(m) for m in members))

    @classmethod
    def silver(cls) -> "NiceSet":
        """``{4j + 2}``, the set used against Silver names."""
        return cls(stride=4, offset=2)

    def __contains__(self, i: int) -> bool:
        if self.members is not None:
            return i in self.members
        return i >= self.offset and (i - self.offset) % self.stride == 0


@dataclass(frozen=True)
class Round:
    tree: frozenset
    enumeration: tuple
    moves: tuple  # (p, q) per enumerated node

    def p(self, eta):
        return self.moves[self.enumeration.index(eta)][0]

    def q(self, eta):
        return self.moves[self.enumeration.index(eta)][1]


@dataclass(frozen=True)
class GameTranscript:
    n: int
    K: NiceSet
    root: Any
    rounds: tuple[Round, ...]
    claimed_witness: Any = None

    def prefix(self, r: int) -> "GameTranscript":
        return GameTranscript(self.n, self.K, self.root, self.rounds[:r], self.claimed_witness)


def maximal_nodes(tree: Iterable[tuple]) -> list[tuple]:
    tree = set(tree)
    inner = {v[:-1] for v in tree if v}
    return sorted((v for v in tree if v not in inner), key=lambda v: (len(v), v))


def _succ_counts(tree) -> dict[tuple, int]:
    counts: dict[tuple, int] = {}
    for v in tree:
        if v:
            counts[v[:-1]] = counts.get(v[:-1], 0) + 1
    return counts


def _check_shape(rnd: Round, i: int) -> None:
    tree = rnd.tree
    if () not in tree:
        raise GameShapeError(f"round {i}: tree lacks the root")
    for v in tree:
        if any((not isinstance(x, int)) or x < 0 for x in v):
            raise GameShapeError(f"round {i}: node {v} has a non-natural entry")
        if v and v[:-1] not in tree:
            raise GameShapeError(f"round {i}: node {v} lacks its parent")
    if sorted(rnd.enumeration) != sorted(maximal_nodes(tree)) or len(set(rnd.enumeration)) != len(rnd.enumeration):
        raise GameShapeError(f"round {i}: enumeration is not an enumeration of the maximal nodes")
    if len(rnd.moves) != len(rnd.enumeration):
        raise GameShapeError(f"round {i}: {len(rnd.moves)} moves for {len(rnd.enumeration)} nodes")


@dataclass(frozen=True)
class RuleFailure:
    rule: str
    round: int
    offender: Any
    message: str


def _fail(found: dict, rule: str, i: int, offender, message: str) -> None:
    found.setdefault(rule, RuleFailure(rule, i, offender, message))


def check_tree_growth(s_prev, s_next, n: int, i: int = 0) -> list[RuleFailure]:
    """Rule (alpha) for the move from ``s_prev`` to ``s_next``; ``s_prev`` is ``None`` at round 0."""
    found: dict[str, RuleFailure] = {}
    s_next = set(s_next)
    max_next = maximal_nodes(s_next)
    for node, c in sorted(_succ_counts(s_next).items()):
        if c > n:
            _fail(found, "alpha.bound", i, node, f"node {node} has {c} > {n} successors")
            break
    if s_prev is None:
        if len(max_next) > n:
            _fail(found, "alpha.size", i, len(max_next), f"{len(max_next)} maximal nodes > {n}")
        return list(found.values())

    s_prev = set(s_prev)
    missing = sorted(s_prev - s_next, key=lambda v: (len(v), v))
    if missing:
        _fail(found, "alpha.passthrough", i, missing[0], f"{missing[0]} dropped from the tree")
    max_prev = set(maximal_nodes(s_prev))
    for eta in max_next:
        if not any(eta[:ell] in max_prev for ell in range(len(eta))):
            _fail(found, "alpha.passthrough", i, eta,
                  f"{eta} does not pass through a maximal node of the previous tree")
            break
    for nu in sorted(max_prev, key=lambda v: (len(v), v)):
        c = sum(1 for eta in max_next if len(eta) > len(nu) and eta[:len(nu)] == nu)
        if not 0 < c <= n:
            _fail(found, "alpha.bound", i, nu, f"{nu} has {c} maximal extensions, need 1..{n}")
            break
    return list(found.values())


def check_nice(s_i, i: int, K: NiceSet, n: int) -> list[RuleFailure]:
    """Shape constraints a K-nice Generic must respect at round ``i``."""
    found: dict[str, RuleFailure] = {}
    tree = set(s_i)
    order = sorted(tree, key=lambda v: (len(v), v))
    for v in order:
        if any(x > n for x in v):
            _fail(found, "nice.alphabet", i, v, f"{v} uses a symbol > {n}")
            break
    for v in order:
        if len(v) > i + 1:
            _fail(found, "nice.depth", i, v, f"{v} is longer than {i + 1}")
            break
    maxes = maximal_nodes(tree)
    for eta in maxes:
        if len(eta) != i + 1:
            _fail(found, "nice.depth", i, eta, f"maximal node {eta} is not at level {i + 1}")
            break
    counts = _succ_counts(tree)
    if i in K:
        for eta in maxes:
            if len(eta) >= i and counts.get(eta[:i], 0) != n:
                _fail(found, "nice.split", i, eta[:i],
                      f"{eta[:i]} has {counts.get(eta[:i], 0)} successors, need {n}")
                break
    else:
        for eta in maxes:
            if len(eta) > i and eta[i] != n:
                _fail(found, "nice.label", i, eta, f"{eta}[{i}] = {eta[i]}, need {n}")
                break
    return list(found.values())


def check_condition_rules(poset, p, transcript: GameTranscript, i: int) -> list[RuleFailure]:
    """Rule (gamma) at round ``i`` plus pairwise incompatibility on K-rounds."""
    found: dict[str, RuleFailure] = {}
    poset.check(p)
    rnd = transcript.rounds[i]
    for pe, qe in rnd.moves:
        poset.check(pe)
        poset.check(qe)
    earlier = [(j, nu, transcript.rounds[j].q(nu))
               for j in range(i) for nu in maximal_nodes(transcript.rounds[j].tree)]
    for eta, (pe, qe) in zip(rnd.enumeration, rnd.moves):
        if not poset.leq(p, pe):
            _fail(found, "gamma.root", i, eta, f"root is not below the condition at {eta}")
        for j, nu, qn in earlier:
            if len(nu) < len(eta) and eta[:len(nu)] == nu and not poset.leq(qn, pe):
                _fail(found, "gamma.chain", i, eta,
                      f"answer at {nu} (round {j}) is not below the condition at {eta}")
        if not poset.leq(pe, qe):
            _fail(found, "gamma.answer", i, eta, f"answer at {eta} is not stronger")
    if i in transcript.K:
        for (e1, (p1, _)), (e2, (p2, _)) in combinations(zip(rnd.enumeration, rnd.moves), 2):
            if poset.compatible(p1, p2):
                _fail(found, "nice.incompat", i, (e1, e2), f"conditions at {e1} and {e2} are compatible")
                break
    return list(found.values())


def predense_above(poset, q, family) -> bool:
    """Every ``r >= q`` is compatible with some member of ``family`` (finite posets only)."""
    if not isinstance(poset, FinitePoset):
        raise UndecidableInstance("predensity is only decided for finite posets")
    fam = [poset.check(a) for a in family]
    if not fam:
        return False
    above = poset.matrix[poset.check(q)]
    hits = poset._compat[:, fam].any(axis=1)
    return bool(hits[above].all())


@dataclass(frozen=True)
class WinVerdict:
    kind: str  # generic_wins | no_witness | undetermined
    witness: Any = None
    rounds: int = 0
    certificate: str = "truncated"
    detail: str = ""


def _silver_predense_on_box(w: SilverCondition, family, bound: int):
    """First total extension of ``w`` on ``[0, bound)`` compatible with no member, else ``None``.

    Compatibility with conditions of bound ``<= bound`` is decided below
    ``bound`` and is inherited downward, so the total extensions suffice.
    """
    free = w.free_below(bound)
    for vals in product(range(w.arity), repeat=len(free)):
        r = silver.union(w, SilverCondition(w.arity, bound, dict(zip(free, vals))))
        if not any(silver.compatible(r, a) for a in family):
            return r
    return None


def win_check(poset, p, transcript: GameTranscript) -> WinVerdict:
    R = len(transcript.rounds)
    families = [[q for _, q in rnd.moves] for rnd in transcript.rounds]
    if isinstance(poset, FinitePoset):
        for q in poset.above(p):
            if all(predense_above(poset, q, fam) for fam in families):
                return WinVerdict("generic_wins", q, R, "truncated",
                                  f"least witness over {R} played rounds")
        return WinVerdict("no_witness", None, R, "truncated", f"no witness over {R} played rounds")

    w = transcript.claimed_witness
    if w is None:
        return WinVerdict("undetermined", None, R, "none", "no claimed witness supplied")
    poset.check(w)
    if not poset.leq(p, w):
        return WinVerdict("undetermined", w, R, "none", "claimed witness is not above the root")
    bound = max([w.bound, p.bound] + [c.bound for rnd in transcript.rounds for pq in rnd.moves for c in pq])
    if len(w.free_below(bound)) > MAX_WITNESS_FREE:
        return WinVerdict("undetermined", w, R, "none",
                          f"witness leaves more than {MAX_WITNESS_FREE} free positions below {bound}")
    for i, fam in enumerate(families):
        bad = _silver_predense_on_box(w, fam, bound)
        if bad is not None:
            return WinVerdict("undetermined", w, R, "none",
                              f"round {i}: extension {bad} is incompatible with every answer")
    return WinVerdict("generic_wins", w, R, "partial",
                      f"claimed witness checked over {R} played rounds below position {bound}")


@dataclass(frozen=True)
class Verdict:
    rounds_played: int
    round_reports: tuple[dict, ...]  # per round: rule id -> RuleFailure | None
    failures: tuple[RuleFailure, ...]  # first failure per rule id
    win: WinVerdict | None = None

    @property
    def legal(self) -> bool:
        return not self.failures

    @property
    def overall(self) -> str:
        return "legal" if self.legal else "illegal"

    @property
    def rule(self) -> str | None:
        if not self.failures:
            return None
        first = min(self.failures, key=lambda f: (f.round, _RULE_ORDER[f.rule]))
        return first.rule

    @property
    def failed_rules(self) -> set[str]:
        return {f.rule for f in self.failures}


def _applicable(i: int) -> list[str]:
    rules = ["alpha.size", "alpha.bound"] if i == 0 else ["alpha.passthrough", "alpha.bound"]
    return rules + ["nice.alphabet", "nice.depth", "nice.label", "nice.split",
                    "gamma.root", "gamma.chain", "gamma.answer", "nice.incompat"]


def validate_transcript(poset, transcript: GameTranscript, *, p=None, K: NiceSet | None = None,
                        n: int | None = None) -> Verdict:
    """Check every played round, then judge the win condition if the play is legal."""
    p = transcript.root if p is None else p
    K = transcript.K if K is None else K
    n = transcript.n if n is None else n
    if n < 2:
        raise GameShapeError("splitting parameter n must be >= 2")
    t = transcript
    if K != t.K or n != t.n or p != t.root:
        t = GameTranscript(n, K, p, t.rounds, t.claimed_witness)
    for i, rnd in enumerate(t.rounds):
        _check_shape(rnd, i)

    reports = []
    first: dict[str, RuleFailure] = {}
    prev = None
    for i, rnd in enumerate(t.rounds):
        fails = (check_tree_growth(prev, rnd.tree, n, i)
                 + check_nice(rnd.tree, i, K, n)
                 + check_condition_rules(poset, p, t, i))
        by_rule = {f.rule: f for f in fails}
        reports.append({r: by_rule.get(r) for r in _applicable(i)})
        for f in fails:
            first.setdefault(f.rule, f)
        prev = rnd.tree
    failures = tuple(sorted(first.values(), key=lambda f: (f.round, _RULE_ORDER[f.rule])))
    win = win_check(poset, p, t) if not failures else None
    return Verdict(len(t.rounds), tuple(reports), failures, win)


def splitting_play(n: int, rounds: int, K: NiceSet | None = None, seed: int = 0,
                   root: SilverCondition | None = None, max_answer: int = 2) -> GameTranscript:
    """A legal play on the n-Silver conditions.

    Generic follows the nice shape and, on K-rounds, splits on one fresh
    position shared by the whole round, giving sibling nodes different values
    there.  Antigeneric answers by filling up to ``max_answer`` free points
    with seeded random symbols.
    """
    K = NiceSet.silver() if K is None else K
    root = silver.empty(n) if root is None else root
    rng = np.random.default_rng(seed)
    answers: dict[tuple, SilverCondition] = {(): root}
    tree = {()}
    played = []
    for i in range(rounds):
        fresh = max(c.bound for c in answers.values())
        leaves = [v for v in maximal_nodes(tree) if len(v) == i]
        labels = range(n) if i in K else (n,)
        new = {leaf + (a,) for leaf in leaves for a in labels}
        tree = tree | new
        enum = tuple(sorted(new))
        moves = []
        for eta in enum:
            base = answers[eta[:-1]]
            if i in K:
                pe = silver.union(base, SilverCondition(n, fresh + 1, {fresh: eta[i]}))
            else:
                pe = base
            sigma = rng.integers(n, size=int(rng.integers(max_answer + 1))).tolist()
            qe = silver.star(pe, sigma)
            moves.append((pe, qe))
            answers[eta] = qe
        played.append(Round(frozenset(tree), enum, tuple(moves)))
    return GameTranscript(n, K, root, tuple(played))
