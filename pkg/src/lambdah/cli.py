"""Command line interface.

    lambdah fmt FILE                 reformat a file of terms
    lambdah extract TERM             print the extraction image
    lambdah reduce TERM              run a head machine
    lambdah solvable TERM            head reduction verdict
    lambdah lockstep TERM            IT vs JT comparison
    lambdah check                    invariant suite over generated corpora
    lambdah corpus FILE              context agreement report

Term arguments use the surface grammar; the uppercase names I, J, Y, G
and Omega expand to the built-in combinators.  Exit status: 0 on
success, 1 when a property is violated or verdicts disagree, 2 on usage
or parse errors.  Output for a given invocation is byte-identical
across runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import threading
from itertools import islice

from .equivalence import (
    BothHnf,
    BothRunning,
    Diverged,
    EMismatch,
    InvalidTrace,
    agreement_row_json,
    agreement_summary_json,
    lemma_suite,
    lockstep,
    read_corpus,
    solved,
    theorem_check,
)
from .extraction import ShapeViolation, extract
from .gen import GenConfig, enumerate_terms, term_stream
from .machines import (
    G,
    I,
    J,
    OMEGA,
    AuxCapExceeded,
    Hnf,
    Overflow,
    Strategy,
    Y,
    run,
    solvable,
    trace_entry_json,
)
from .syntax import ParseError, UnboundVariable, format_term, from_debruijn, parse_term

_BUILTINS = {
    "I": from_debruijn(I),
    "J": from_debruijn(J),
    "Y": from_debruijn(Y),
    "G": from_debruijn(G),
    "Omega": from_debruijn(OMEGA),
}


def _read_term(text: str):
    return parse_term(text, constants=_BUILTINS)


# ---------- subcommands ----------


def _cmd_fmt(args) -> int:
    source = sys.stdin if args.file == "-" else open(args.file, encoding="utf-8")
    with source:
        for raw in source:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            term, names = _read_term(line)
            print(format_term(term, names))
    return 0


def _cmd_extract(args) -> int:
    term, names = _read_term(args.term)
    print(format_term(extract(term), names))
    return 0


def _cmd_reduce(args) -> int:
    term, names = _read_term(args.term)
    strategy = Strategy(args.strategy)
    outcome = run(term, strategy, args.fuel, keep_trace=args.trace)
    if args.trace and outcome.trace:
        for entry in outcome.trace:
            if args.json:
                print(trace_entry_json(entry, names))
            else:
                print(f"{entry.kind.value:6} {format_term(entry.after, names)}")
    final = outcome.result if isinstance(outcome, Hnf) else outcome.last
    if args.json:
        if isinstance(outcome, Hnf):
            word = "hnf"
        elif isinstance(outcome, Overflow):
            word = "overflow"
        else:
            word = "fuel_exhausted"
        record = {
            "outcome": word,
            "term": format_term(final, names),
            "t_steps": outcome.t_steps,
        }
        if isinstance(outcome, Hnf):
            record["aux_steps"] = outcome.aux_steps
        print(json.dumps(record))
    elif isinstance(outcome, Hnf):
        print(f"hnf (t_steps={outcome.t_steps}, aux_steps={outcome.aux_steps})")
        print(format_term(outcome.result, names))
    elif isinstance(outcome, Overflow):
        print(f"state outgrew the budget after {outcome.t_steps} t-steps")
        print(format_term(outcome.last, names))
    else:
        print(f"fuel exhausted after {outcome.t_steps} t-steps")
        print(format_term(outcome.last, names))
    return 0


def _cmd_solvable(args) -> int:
    term, names = _read_term(args.term)
    outcome = solvable(term, args.fuel)
    if isinstance(outcome, Hnf):
        print(f"hnf after {outcome.t_steps} t-steps")
        print(format_term(outcome.result, names))
    else:
        print(f"unknown: fuel exhausted after {outcome.t_steps} t-steps")
    return 0


def _cmd_lockstep(args) -> int:
    term, names = _read_term(args.term)
    report = lockstep(term, args.max_t)
    if args.json:
        for cp in report.checkpoints:
            print(
                json.dumps(
                    {
                        "t_step": cp.t_step_index,
                        "image_I": format_term(cp.image_i, names),
                        "image_J": format_term(cp.image_j, names),
                        "equal": cp.equal,
                    }
                )
            )
    else:
        for cp in report.checkpoints:
            mark = "==" if cp.equal else "!="
            print(
                f"t-step {cp.t_step_index}: {format_term(cp.image_i, names)} "
                f"{mark} {format_term(cp.image_j, names)}"
            )
    match report.verdict:
        case BothHnf():
            word, code = "both-hnf", 0
        case BothRunning():
            word, code = "both-running", 0
        case Diverged(step):
            word, code = f"diverged (one side halted at t-step {step})", 1
        case EMismatch(step):
            word, code = f"image mismatch at t-step {step}", 1
    if args.json:
        print(
            json.dumps(
                {
                    "verdict": word.split(" ")[0],
                    "t_steps_I": report.t_steps_i,
                    "t_steps_J": report.t_steps_j,
                }
            )
        )
    else:
        print(f"verdict: {word} (t-steps {report.t_steps_i}/{report.t_steps_j})")
    return code


def _cmd_check(args) -> int:
    corpus = list(enumerate_terms(args.max_size, free_vars=1))
    cfg = GenConfig(seed=args.seed, max_size=args.random_size, free_vars=2)
    corpus.extend(islice(term_stream(cfg), args.count))
    groups = None if args.suite == "all" else [args.suite]
    report = lemma_suite(
        corpus, seed=args.seed, fuel=args.fuel, max_t=args.max_t, groups=groups
    )
    name_width = max(len(r.name) for r in report.results)
    print(f"{'check':{name_width}}  checked  skipped  failed")
    for r in report.results:
        print(f"{r.name:{name_width}}  {r.checked:7}  {r.skipped:7}  {r.failed:6}")
        for failure in r.failures:
            print(f"    counterexample: {failure}")
    if report.ok:
        print(f"ok: {len(report.results)} checks over {len(corpus)} terms")
        return 0
    print("FAILED")
    return 1


def _cmd_corpus(args) -> int:
    entries = read_corpus(args.file, constants=_BUILTINS)
    rows = []
    for entry in entries:
        row = theorem_check(entry.term, args.fuel, j_fuel_ratio=args.j_fuel_ratio)
        rows.append(row)
        if args.json:
            print(agreement_row_json(row, entry.free_vars))
        else:
            vi = "hnf" if solved(row.verdict_i) else "unknown"
            vj = "hnf" if solved(row.verdict_j) else "unknown"
            flag = "agree" if row.agree else "DISAGREE"
            print(f"{entry.text}: I={vi}({row.verdict_i.t_steps}) "
                  f"J={vj}({row.verdict_j.t_steps}) {flag}")
    if args.json:
        print(agreement_summary_json(rows))
    else:
        disagreements = sum(1 for r in rows if not r.agree)
        unknown = sum(
            1 for r in rows if not solved(r.verdict_i) and not solved(r.verdict_j)
        )
        print(
            f"{len(rows)} contexts, {disagreements} disagreements, "
            f"{unknown} both-unknown"
        )
    return 0 if all(r.agree for r in rows) else 1


# ---------- argument parsing ----------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdah",
        description="head reduction workbench for lambda terms with the constant H",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fmt", help="reformat a file of terms (one per line)")
    p.add_argument("file", help="input path, or - for stdin")
    p.set_defaults(fn=_cmd_fmt)

    p = sub.add_parser("extract", help="print the extraction image of a term")
    p.add_argument("term")
    p.set_defaults(fn=_cmd_extract)

    p = sub.add_parser("reduce", help="run a head machine on a term")
    p.add_argument("term")
    p.add_argument(
        "--strategy",
        choices=[s.value for s in Strategy],
        default=Strategy.IT.value,
        help="t, i, j, it, or jt (default it)",
    )
    p.add_argument("--fuel", type=int, default=1000, help="t-step budget")
    p.add_argument("--trace", action="store_true", help="print every step")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("solvable", help="head-reduce by t-steps alone")
    p.add_argument("term")
    p.add_argument("--fuel", type=int, default=1000)
    p.set_defaults(fn=_cmd_solvable)

    p = sub.add_parser("lockstep", help="compare the IT and JT machines")
    p.add_argument("term")
    p.add_argument("--max-t", type=int, default=100, help="paired t-step budget")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_lockstep)

    p = sub.add_parser("check", help="run the invariant suite over generated terms")
    p.add_argument(
        "--suite",
        choices=["all", "extraction", "machines", "equivalence"],
        default="all",
    )
    p.add_argument("--max-size", type=int, default=5, help="exhaustive portion bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=150, help="random portion size")
    p.add_argument("--random-size", type=int, default=12, help="random term bound")
    p.add_argument("--fuel", type=int, default=300)
    p.add_argument("--max-t", type=int, default=50)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("corpus", help="context agreement report for a corpus file")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=10000)
    p.add_argument(
        "--j-fuel-ratio",
        type=int,
        default=20,
        help="fuel multiplier for the substituted J side (default 20)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    sys.setrecursionlimit(50000)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except BrokenPipeError:
        # the consumer of our output went away (head, less, ...)
        return 0
    except (ParseError, UnboundVariable, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ShapeViolation, AuxCapExceeded, InvalidTrace) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    # substitution and formatting recurse as deep as the term; the main
    # thread's native stack is too small for the recursion limit main()
    # installs, so do the work on a thread with a roomy one
    threading.stack_size(512 * 1024 * 1024)
    status: list[int] = []
    worker = threading.Thread(target=lambda: status.append(main()), daemon=True)
    worker.start()
    worker.join()
    try:
        sys.stdout.flush()
    except BrokenPipeError:
        # flush what remains into the void so the interpreter's own
        # shutdown flush does not complain a second time
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    raise SystemExit(status[0] if status else 1)
