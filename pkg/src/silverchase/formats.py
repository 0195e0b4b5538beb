"""Readers and writers for every on-disk format.

Text formats:

* condition: ``n=<arity> B=<bound> <pos>=<val>,...`` (positions increasing;
  the assignment list is omitted when empty)
* psi table: header ``psi a=<arity> D=<horizon>``, then ``<digits> <label>``
  per string; ``#`` starts a comment
* chase report: key/value lines, one block per stage, the table appended

Structured documents are JSON with a ``format_version`` field, checked against
the schemas in ``silverchase/data``.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from silverchase.chase import (
    ChaseResult,
    ChaseStage,
    ChaseStatus,
    RepresentativeRecord,
)
from silverchase.game import (
    BoundedSilver,
    FinitePoset,
    GameTranscript,
    NiceSet,
    Round,
    Verdict,
)
from silverchase.psi import LABEL_MAX, LabeledTree, PartialAssignment, PsiTable, is_k_ary
from silverchase.silver import SilverCondition

FORMAT_VERSION = 1
DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class FormatError(ValueError):
    """Input text or document does not parse."""


# -- strings ------------------------------------------------------------------

def fmt_string(t) -> str:
    return "<" + ",".join(str(x) for x in t) + ">"


def parse_string(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not (text.startswith("<") and text.endswith(">")):
        raise FormatError(f"bad string literal {text!r}")
    body = text[1:-1].strip()
    if not body:
        return ()
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError as exc:
        raise FormatError(f"bad string literal {text!r}") from exc


# -- conditions ---------------------------------------------------------------

def encode_condition(f) -> str:
    head = f"n={f.arity} B={f.bound}"
    if not f.items:
        return head
    return head + " " + ",".join(f"{p}={v}" for p, v in f.items)


_COND_RE = re.compile(r"^\s*n=(\d+)\s+B=(\d+)(?:\s+(\S+))?\s*$")


def decode_condition(text: str, cls=SilverCondition):
    m = _COND_RE.match(text)
    if not m:
        raise FormatError(f"bad condition {text!r}")
    arity, bound, body = int(m.group(1)), int(m.group(2)), m.group(3)
    pairs = []
    if body:
        for part in body.split(","):
            pos, sep, val = part.partition("=")
            if not sep or not pos.isdigit() or not val.isdigit():
                raise FormatError(f"bad assignment {part!r} in {text!r}")
            pairs.append((int(pos), int(val)))
    positions = [p for p, _ in pairs]
    if any(a >= b for a, b in zip(positions, positions[1:])):
        raise FormatError(f"positions must be strictly increasing in {text!r}")
    try:
        return cls(arity, bound, dict(pairs))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# -- psi tables ---------------------------------------------------------------

def dump_psi(psi: PsiTable) -> str:
    if psi.arity > len(DIGITS):
        raise FormatError(f"arity {psi.arity} has no digit alphabet")
    lines = [f"psi a={psi.arity} D={psi.horizon}"]
    for t, label in psi.items():
        lines.append(f"{''.join(DIGITS[s] for s in t)} {label}")
    return "\n".join(lines) + "\n"


_PSI_HEAD = re.compile(r"^psi a=(\d+) D=(\d+)$")


def load_psi(text: str) -> PsiTable:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise FormatError("empty psi table")
    head = _PSI_HEAD.match(rows[0][1])
    if not head:
        raise FormatError(f"line {rows[0][0]}: expected 'psi a=<arity> D=<horizon>'")
    a, D = int(head.group(1)), int(head.group(2))
    if not 2 <= a <= len(DIGITS) or D < 1:
        raise FormatError(f"unsupported table shape a={a} D={D}")
    labels: dict[tuple[int, ...], int] = {}
    for lineno, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected '<digits> <label>'")
        word, lab = parts
        try:
            t = tuple(DIGITS.index(ch) for ch in word)
        except ValueError:
            raise FormatError(f"line {lineno}: bad digit in {word!r}") from None
        if any(s >= a for s in t) or not 1 <= len(t) <= D:
            raise FormatError(f"line {lineno}: {word!r} is not a string of length 1..{D} over {a} symbols")
        if not lab.isdigit() or int(lab) > LABEL_MAX:
            raise FormatError(f"line {lineno}: label {lab!r} outside [0, 2^63)")
        if t in labels:
            raise FormatError(f"line {lineno}: duplicate entry for {word!r}")
        labels[t] = int(lab)
    expected = sum(a**m for m in range(1, D + 1))
    if len(labels) != expected:
        raise FormatError(f"table lists {len(labels)} strings, expected {expected}")
    return PsiTable.from_mapping(a, D, labels)


# -- DOT ----------------------------------------------------------------------

def tree_to_dot(tree, name: str = "T") -> str:
    nodes = LabeledTree(tree).sorted_nodes()
    ids = {v: f"n{k}" for k, v in enumerate(nodes)}
    lines = [f"digraph {name} {{"]
    for v in nodes:
        lines.append(f'  {ids[v]} [label="{fmt_string(v)}"];')
    for v in nodes:
        if v:
            lines.append(f"  {ids[v[:-1]]} -> {ids[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r'^\s*(n\d+) \[label="(<[^"]*>)"\];$')
_DOT_EDGE = re.compile(r"^\s*(n\d+) -> (n\d+);$")


def dot_edges(text: str) -> set[tuple[tuple, tuple]]:
    """Parent/child pairs named by a DOT document written by :func:`tree_to_dot`."""
    lines = text.strip().splitlines()
    if not re.match(r"^digraph \w+ \{$", lines[0]) or lines[-1] != "}":
        raise FormatError("not a digraph document")
    labels, edges = {}, []
    for line in lines[1:-1]:
        if m := _DOT_NODE.match(line):
            labels[m.group(1)] = parse_string(m.group(2))
        elif m := _DOT_EDGE.match(line):
            edges.append((m.group(1), m.group(2)))
        else:
            raise FormatError(f"unrecognised DOT line {line!r}")
    return {(labels[a], labels[b]) for a, b in edges}


# -- JSON plumbing ------------------------------------------------------------

def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


@lru_cache(maxsize=None)
def _schema(name: str) -> dict:
    return json.loads(resources.files("silverchase").joinpath("data").joinpath(f"{name}.schema.json").read_text())


def _validate(doc, name: str) -> None:
    try:
        jsonschema.validate(doc, _schema(name))
    except jsonschema.ValidationError as exc:
        raise FormatError(f"{name} document: {exc.message}") from exc


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


# -- chase reports ------------------------------------------------------------

def _stage_doc(psi, st: ChaseStage) -> dict:
    tree = st.tree(psi)
    return {
        "index": st.index,
        "frontier": st.frontier,
        "assignment": encode_condition(st.assignment),
        "free": list(st.free),
        "tree": [list(v) for v in tree.sorted_nodes()],
        "binary": is_k_ary(tree, 2),
        "representatives": [list(d) for d in st.representatives],
        "records": [
            {"representative": list(r.representative), "branch": r.branch,
             "frontier": r.frontier, "extension": [list(pv) for pv in r.extension]}
            for r in st.records
        ],
    }


def chase_to_doc(result: ChaseResult) -> dict:
    s = result.status
    return {
        "format_version": FORMAT_VERSION,
        "kind": "chase-report",
        "psi": {"a": result.psi.arity, "D": result.psi.horizon,
                "levels": [lev.tolist() for lev in result.psi.levels]},
        "max_stages": result.max_stages,
        "status": {"kind": s.kind, "reason": s.reason, "stage": s.stage,
                   "representative": None if s.representative is None else list(s.representative)},
        "stages": [_stage_doc(result.psi, st) for st in result.stages],
        "final_tree": [list(v) for v in result.final_tree.sorted_nodes()],
    }


def chase_from_doc(doc: dict) -> ChaseResult:
    _validate(doc, "chase")
    p = doc["psi"]
    psi = PsiTable(p["a"], p["D"], p["levels"])
    stages = tuple(
        ChaseStage(
            st["index"], st["frontier"], decode_condition(st["assignment"], PartialAssignment),
            tuple(tuple(d) for d in st["representatives"]),
            tuple(RepresentativeRecord(tuple(r["representative"]), r["branch"], r["frontier"],
                                       tuple((int(a), int(b)) for a, b in r["extension"]))
                  for r in st["records"]),
        )
        for st in doc["stages"]
    )
    s = doc["status"]
    rep = s.get("representative")
    status = ChaseStatus(s["kind"], s["reason"], s.get("stage"), None if rep is None else tuple(rep))
    return ChaseResult(psi, doc["max_stages"], stages, status,
                       LabeledTree(tuple(v) for v in doc["final_tree"]))


def chase_to_text(result: ChaseResult) -> str:
    s = result.status
    out = [f"chase-report format_version={FORMAT_VERSION}",
           f"max_stages {result.max_stages}"]
    if s.kind == "completed":
        out.append(f"status completed reason={s.reason}")
    else:
        out.append(f"status horizon_exhausted stage={s.stage} "
                   f"representative={fmt_string(s.representative)} reason={s.reason}")
    for st in result.stages:
        tree = st.tree(result.psi)
        out.append(f"stage {st.index} N={st.frontier}")
        out.append(f"  xi {encode_condition(st.assignment)}")
        out.append("  free " + " ".join(str(k) for k in st.free) if st.free else "  free")
        out.append("  tree " + " ".join(fmt_string(v) for v in tree.sorted_nodes()))
        out.append(f"  binary {'yes' if is_k_ary(tree, 2) else 'no'}")
        if st.representatives:
            out.append("  delta " + " ".join(fmt_string(d) for d in st.representatives))
        for r in st.records:
            ext = ",".join(f"{p}={v}" for p, v in r.extension) or "-"
            out.append(f"  rep {fmt_string(r.representative)} branch={r.branch} N={r.frontier} ext={ext}")
    out.append("final-tree " + " ".join(fmt_string(v) for v in result.final_tree.sorted_nodes()))
    out.append(f"final-free {' '.join(str(k) for k in result.final.free) or '-'}")
    out.append(f"final-binary {'yes' if is_k_ary(result.final_tree, 2) else 'no'}")
    out.append("table")
    out.append(dump_psi(result.psi).rstrip("\n"))
    return "\n".join(out) + "\n"


def chase_from_text(text: str) -> ChaseResult:
    lines = text.splitlines()
    try:
        k = lines.index("table")
    except ValueError:
        raise FormatError("chase report lacks its table section") from None
    psi = load_psi("\n".join(lines[k + 1:]))
    body = lines[:k]
    if not body or body[0] != f"chase-report format_version={FORMAT_VERSION}":
        raise FormatError("not a chase report")
    try:
        max_stages = int(body[1].split()[1])
        status = _parse_status(body[2])
        stages: list[dict] = []
        final_tree = None
        for line in body[3:]:
            word, _, rest = line.strip().partition(" ")
            if word == "stage":
                idx, nfield = rest.split()
                stages.append({"index": int(idx), "N": int(nfield[2:]), "delta": (), "records": []})
            elif word == "xi":
                stages[-1]["xi"] = decode_condition(rest, PartialAssignment)
            elif word == "delta":
                stages[-1]["delta"] = tuple(parse_string(x) for x in rest.split())
            elif word == "rep":
                rep, branch, nfield, ext = rest.split()
                pairs = () if ext == "ext=-" else tuple(
                    tuple(int(x) for x in pv.split("=")) for pv in ext[4:].split(","))
                stages[-1]["records"].append(
                    RepresentativeRecord(parse_string(rep), branch.split("=")[1], int(nfield[2:]), pairs))
            elif word == "final-tree":
                final_tree = LabeledTree(parse_string(x) for x in rest.split())
            elif word in ("free", "tree", "binary", "final-free", "final-binary"):
                continue  # derived values
            else:
                raise FormatError(f"unexpected line {line!r}")
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed chase report: {exc}") from exc
    if final_tree is None or not stages:
        raise FormatError("chase report lacks stages or final tree")
    built = tuple(ChaseStage(s["index"], s["N"], s["xi"], s["delta"], tuple(s["records"])) for s in stages)
    return ChaseResult(psi, max_stages, built, status, final_tree)


def _parse_status(line: str) -> ChaseStatus:
    head, _, rest = line.partition(" ")
    if head != "status":
        raise FormatError(f"expected status line, got {line!r}")
    kind, _, rest = rest.partition(" ")
    if kind == "completed":
        return ChaseStatus("completed", rest.removeprefix("reason="))
    m = re.match(r"^stage=(\d+) representative=(<[^>]*>) reason=(.*)$", rest)
    if kind != "horizon_exhausted" or not m:
        raise FormatError(f"bad status line {line!r}")
    return ChaseStatus(kind, m.group(3), int(m.group(1)), parse_string(m.group(2)))


# -- posets and transcripts ---------------------------------------------------

def poset_to_doc(poset) -> dict:
    if isinstance(poset, FinitePoset):
        return {"format_version": FORMAT_VERSION, "kind": "finite", "leq": poset.matrix.astype(int).tolist()}
    return {"format_version": FORMAT_VERSION, "kind": "silver", "n": poset.n}


def poset_from_doc(doc: dict):
    _validate(doc, "poset")
    if doc["kind"] == "finite":
        return FinitePoset(doc["leq"])
    return BoundedSilver(doc["n"])


def _cond_out(x):
    return x if isinstance(x, int) else encode_condition(x)


def _cond_in(x, poset):
    if isinstance(poset, BoundedSilver):
        if not isinstance(x, str):
            raise FormatError(f"expected a condition string, got {x!r}")
        return decode_condition(x)
    if not isinstance(x, int):
        raise FormatError(f"expected an element index, got {x!r}")
    return x


def _k_out(K: NiceSet):
    if K == NiceSet.silver():
        return "silver"
    if K.members is not None:
        return {"members": sorted(K.members)}
    return {"stride": K.stride, "offset": K.offset}


def _k_in(doc) -> NiceSet:
    if doc == "silver":
        return NiceSet.silver()
    if "members" in doc:
        return NiceSet.finite(doc["members"])
    return NiceSet.progression(doc["stride"], doc.get("offset", 0))


def transcript_to_doc(t: GameTranscript) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": t.n,
        "K": _k_out(t.K),
        "root": _cond_out(t.root),
        "claimed_witness": None if t.claimed_witness is None else _cond_out(t.claimed_witness),
        "rounds": [
            {"tree": [list(v) for v in sorted(r.tree, key=lambda v: (len(v), v))],
             "enumeration": [list(e) for e in r.enumeration],
             "moves": [{"p": _cond_out(p), "q": _cond_out(q)} for p, q in r.moves]}
            for r in t.rounds
        ],
    }


def transcript_from_doc(doc: dict, poset) -> GameTranscript:
    _validate(doc, "transcript")
    rounds = tuple(
        Round(frozenset(tuple(v) for v in r["tree"]),
              tuple(tuple(e) for e in r["enumeration"]),
              tuple((_cond_in(m["p"], poset), _cond_in(m["q"], poset)) for m in r["moves"]))
        for r in doc["rounds"]
    )
    w = doc.get("claimed_witness")
    return GameTranscript(doc["n"], _k_in(doc["K"]), _cond_in(doc["root"], poset), rounds,
                          None if w is None else _cond_in(w, poset))


def verdict_to_doc(v: Verdict) -> dict:
    def off(x):
        if isinstance(x, tuple):
            return [off(y) for y in x]
        if isinstance(x, SilverCondition):
            return encode_condition(x)
        return x

    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "verdict",
        "overall": v.overall,
        "rule": v.rule,
        "rounds_played": v.rounds_played,
        "failures": [{"rule": f.rule, "round": f.round, "offender": off(f.offender), "message": f.message}
                     for f in v.failures],
        "rounds": [{r: ("pass" if f is None else "fail") for r, f in rep.items()} for rep in v.round_reports],
        "win": None,
    }
    if v.win is not None:
        doc["win"] = {"kind": v.win.kind,
                      "witness": None if v.win.witness is None else _cond_out(v.win.witness),
                      "rounds": v.win.rounds, "certificate": v.win.certificate, "detail": v.win.detail}
    return doc


def verdict_to_text(v: Verdict) -> str:
    out = [f"verdict {v.overall}" + (f" rule={v.rule}" if v.rule else ""),
           f"rounds {v.rounds_played}"]
    for i, rep in enumerate(v.round_reports):
        out.append(f"round {i} " + " ".join(f"{r}={'pass' if f is None else 'FAIL'}" for r, f in rep.items()))
    for f in v.failures:
        out.append(f"failure {f.rule} round={f.round} {f.message}")
    if v.win is not None:
        w = v.win
        wit = "-" if w.witness is None else _cond_out(w.witness)
        out.append(f"win {w.kind} witness={wit} certificate={w.certificate} ({w.detail})")
    return "\n".join(out) + "\n"
