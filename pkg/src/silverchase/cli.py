"""Command-line interface.

Exit codes: 0 success (chase completed / transcript legal), 1 input or usage
error, 2 chase ran out of horizon, 3 transcript illegal.
"""

from __future__ import annotations

import argparse
import os
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from silverchase import __version__, silver
from silverchase.chase import PSI_KINDS, InfeasibleParameters, chase, gen_psi, oracle_search
from silverchase.formats import (
    DIGITS,
    FormatError,
    chase_to_doc,
    chase_to_text,
    decode_condition,
    dump_psi,
    dumps,
    encode_condition,
    load_psi,
    parse_string,
    poset_from_doc,
    transcript_from_doc,
    transcript_to_doc,
    tree_to_dot,
    verdict_to_doc,
    verdict_to_text,
    _loads,
)
from silverchase.game import GameShapeError, NiceSet, PosetError, UnknownElementError, splitting_play, validate_transcript
from silverchase.psi import PsiDomainError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HORIZON = 2
EXIT_ILLEGAL = 3

THREADS_ENV = "SILVER_CHASE_THREADS"


class UsageError(ValueError):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    return Path(path).read_text()


# -- silver expressions -------------------------------------------------------

def _condition_literal(tok: str, n: int):
    tok = tok.strip()
    if not tok:
        return silver.empty(n)
    if tok.startswith("n="):
        return decode_condition(tok)
    return decode_condition(f"n={n} B={_tight_bound(tok)} {tok}")


def _tight_bound(body: str) -> int:
    try:
        return max(int(part.split("=")[0]) for part in body.split(",")) + 1
    except ValueError:
        raise FormatError(f"bad condition literal {body!r}") from None


def _symbols(tok: str) -> tuple[int, ...]:
    if tok.startswith("<"):
        return parse_string(tok)
    try:
        return tuple(DIGITS.index(ch) for ch in tok)
    except ValueError:
        raise FormatError(f"bad symbol string {tok!r}") from None


def _index(text: str) -> int:
    if not text.isdigit():
        raise FormatError(f"bad index {text!r}")
    return int(text)


def evaluate_silver(expr: str, n: int = 2):
    """Evaluate a small expression over condition literals.

    Forms: ``FP_<i> of C``, ``C``, ``C <rel> C`` with ``<rel>`` one of
    ``<=``, ``<=*_<i>``, ``compat``, ``union``; each ``C`` is a quoted literal
    optionally followed by ``* <symbols>`` steps.
    """
    try:
        toks = shlex.split(expr)
    except ValueError as exc:
        raise FormatError(f"cannot tokenize expression: {exc}") from None
    pos = 0

    def cond():
        nonlocal pos
        if pos >= len(toks):
            raise FormatError("expected a condition literal")
        f = _condition_literal(toks[pos], n)
        pos += 1
        while pos < len(toks) and toks[pos] == "*":
            if pos + 1 >= len(toks):
                raise FormatError("'*' needs a symbol string")
            f = silver.star(f, _symbols(toks[pos + 1]))
            pos += 2
        return f

    if toks and toks[0].startswith("FP_"):
        if len(toks) < 3 or toks[1] != "of":
            raise FormatError("expected 'FP_<i> of <condition>'")
        i = _index(toks[0][3:])
        pos = 2
        value = silver.free_point(cond(), i)
    else:
        left = cond()
        if pos == len(toks):
            value = left
        else:
            op = toks[pos]
            pos += 1
            right = cond()
            if op == "<=":
                value = silver.leq(left, right)
            elif op.startswith("<=*_"):
                value = silver.leq_star(_index(op[4:]), left, right)
            elif op == "compat":
                value = silver.compatible(left, right)
            elif op == "union":
                value = silver.union(left, right)
            else:
                raise FormatError(f"unknown operator {op!r}")
    if pos != len(toks):
        raise FormatError(f"trailing input: {' '.join(toks[pos:])}")
    return value


def render_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, silver.SilverCondition):
        return encode_condition(value)
    return str(value)


# -- commands -----------------------------------------------------------------

def cmd_psi_gen(args) -> int:
    psi = gen_psi(args.seed, args.a, args.D, args.label_range, args.kind)
    text = dump_psi(psi)
    head, _, rest = text.partition("\n")
    meta = f"# kind={args.kind} seed={args.seed} label_range={args.label_range}"
    _emit(f"{head}\n{meta}\n{rest}", args.out)
    return EXIT_OK


def cmd_chase(args) -> int:
    psi = load_psi(_read(args.table))
    result = chase(psi, args.max_stages)
    if args.format == "doc":
        text = dumps(chase_to_doc(result))
    elif args.format == "dot":
        text = tree_to_dot(result.final_tree)
    else:
        text = chase_to_text(result)
    _emit(text, args.out)
    return EXIT_OK if result.status.completed else EXIT_HORIZON


def cmd_oracle(args) -> int:
    psi = load_psi(_read(args.table))
    L = psi.horizon if args.L is None else args.L
    if L > psi.horizon:
        raise UsageError(f"--L {L} exceeds the table horizon {psi.horizon}")
    hits = oracle_search(psi, L, args.free, args.k)
    member = None
    if psi.arity == 2:
        run = chase(psi, L + 1)
        stage = next((s for s in run.stages if s.frontier == L and len(s.free) == args.free), None)
        if stage is not None:
            member = stage.assignment in hits
    if args.format == "doc":
        text = dumps({"format_version": 1, "kind": "oracle-listing", "L": L, "free": args.free,
                      "k": args.k, "count": len(hits), "chase_member": member,
                      "assignments": [encode_condition(x) for x in hits]})
    else:
        lines = [f"oracle L={L} free={args.free} k={args.k} count={len(hits)}"]
        lines += [f"  {encode_condition(x)}" for x in hits]
        lines.append("chase-member " + {None: "n/a", True: "yes", False: "no"}[member])
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_game_validate(args) -> int:
    poset = poset_from_doc(_loads(_read(args.poset)))
    transcript = transcript_from_doc(_loads(_read(args.transcript)), poset)
    verdict = validate_transcript(poset, transcript)
    text = dumps(verdict_to_doc(verdict)) if args.format == "doc" else verdict_to_text(verdict)
    _emit(text, args.out)
    return EXIT_OK if verdict.legal else EXIT_ILLEGAL


def cmd_game_script(args) -> int:
    t = splitting_play(args.n, args.rounds, NiceSet.silver(), seed=args.seed)
    _emit(dumps(transcript_to_doc(t)), args.out)
    return EXIT_OK


def cmd_silver(args) -> int:
    _emit(render_value(evaluate_silver(args.expression, args.n)) + "\n", args.out)
    return EXIT_OK


def _sweep_one(job):
    seed, D, label_range, kind, max_stages = job
    run = chase(gen_psi(seed, 2, D, label_range, kind), max_stages)
    return D, seed, len(run.stages) - 1, run.status.kind


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if cap <= 0:
        return os.cpu_count() or 1
    return cap


def cmd_sweep(args) -> int:
    jobs = [(args.seed + s, D, args.label_range, args.kind, args.max_stages)
            for D in range(args.D_min, args.D_max + 1) for s in range(args.tables)]
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, jobs, chunksize=16))
    else:
        rows = [_sweep_one(j) for j in jobs]
    lines = [f"sweep kind={args.kind} label_range={args.label_range} tables={args.tables} seed={args.seed}",
             "D  mean_stages  min_stages  max_stages  exhausted"]
    for D in range(args.D_min, args.D_max + 1):
        got = [r for r in rows if r[0] == D]
        stages = [r[2] for r in got]
        exhausted = sum(r[3] == "horizon_exhausted" for r in got)
        lines.append(f"{D:<2} {sum(stages) / len(stages):11.3f}  {min(stages):10d}  {max(stages):10d}  {exhausted:9d}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="silverchase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"silverchase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi-gen", help="generate a labeling table")
    p.add_argument("--kind", choices=PSI_KINDS, default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--a", type=int, default=2, help="alphabet size")
    p.add_argument("--D", type=int, default=4, help="horizon")
    p.add_argument("--label-range", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_psi_gen)

    p = sub.add_parser("chase", help="run the chase on a table")
    p.add_argument("table")
    p.add_argument("--max-stages", type=int, default=8)
    p.add_argument("--format", choices=("text", "doc", "dot"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chase)

    p = sub.add_parser("oracle", help="list every assignment with a k-ary tree")
    p.add_argument("table")
    p.add_argument("--L", type=int, help="depth (default: horizon)")
    p.add_argument("--free", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--format", choices=("text", "doc"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("game-validate", help="referee a game transcript")
    p.add_argument("--poset", required=True)
    p.add_argument("--transcript", required=True)
    p.add_argument("--format", choices=("text", "doc"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_game_validate)

    p = sub.add_parser("game-script", help="write a scripted splitting play on Silver conditions")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--rounds", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_game_script)

    p = sub.add_parser("silver", help="evaluate a Silver condition expression")
    p.add_argument("expression")
    p.add_argument("--n", type=int, default=2, help="value arity for bare literals")
    p.add_argument("--out")
    p.set_defaults(func=cmd_silver)

    p = sub.add_parser("sweep", help="stages reached by the chase across horizons")
    p.add_argument("--kind", choices=PSI_KINDS, default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tables", type=int, default=100)
    p.add_argument("--D-min", type=int, default=2)
    p.add_argument("--D-max", type=int, default=7)
    p.add_argument("--label-range", type=int, default=4)
    p.add_argument("--max-stages", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, PsiDomainError, InfeasibleParameters, GameShapeError, PosetError,
            UnknownElementError, UsageError, silver.ClashError, silver.ArityError, OSError) as exc:
        print(f"silverchase: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
