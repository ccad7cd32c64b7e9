"""Equivalence checking between the I-flavoured and J-flavoured machines.

The central claim mechanised here: a term with the head constant H in it
behaves the same whether H is run by dropping it (I-steps, the identity
reading) or by pushing it inward one argument at a time (J-steps, the
unbounded eta-expansion reading).  Concretely,

  * ``lockstep`` runs the IT and JT machines side by side, pausing after
    each t-step, and compares the extraction images of the two states;
  * ``theorem_check`` compares plain head reduction of U[I/H] against
    U[J/H], together with the two machine verdicts on U itself;
  * ``lift_j_trace`` replays the constructive argument that a J-step
    sequence survives the appending of extra arguments;
  * ``lemma_suite`` evaluates every step-level invariant over a corpus
    and reports counterexamples.

Fuel exhaustion is always reported as "unknown", never as a verdict of
unsolvability, so definite disagreement means one side reached a head
normal form while the other provably cannot (which should never occur).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from os import PathLike
from typing import Callable, Iterable, Sequence

from .extraction import ShapeViolation, classify, extract, has_applied_h
from .gen import wrap_applied_h
from .machines import (
    AuxCapExceeded,
    Hnf,
    I,
    J,
    MachineOutcome,
    Overflow,
    StepKind,
    Strategy,
    TraceEntry,
    i_step,
    j_step,
    run,
    solvable,
    t_step,
)
from .syntax import SourceTerm, format_term, parse_term
from .terms import (
    Abs,
    App,
    H,
    HeadH,
    HeadRedex,
    Term,
    Var,
    alpha_eq,
    apply_args,
    is_closed,
    is_hnf,
    size,
    spine,
    subst_const_h,
    substitute,
    unwind_app,
)


def solved(outcome: MachineOutcome) -> bool:
    return isinstance(outcome, Hnf)


# ---------- lockstep comparison ----------


@dataclass(frozen=True, slots=True)
class BothHnf:
    pass


@dataclass(frozen=True, slots=True)
class BothRunning:
    pass


@dataclass(frozen=True, slots=True)
class Diverged:
    step: int


@dataclass(frozen=True, slots=True)
class EMismatch:
    step: int


LockstepVerdict = BothHnf | BothRunning | Diverged | EMismatch


@dataclass(frozen=True, slots=True)
class Checkpoint:
    t_step_index: int
    image_i: Term
    image_j: Term
    equal: bool


@dataclass(frozen=True, slots=True)
class LockstepReport:
    input: Term
    checkpoints: tuple[Checkpoint, ...]
    verdict: LockstepVerdict
    t_steps_i: int
    t_steps_j: int
    aux_steps_i: int
    aux_steps_j: int


class _SettleOverflow(Exception):
    # a side outgrew the state budget with its burst still pending
    pass


def _settle(
    t: Term, strategy: Strategy, cap_aux: int | None, max_state: int | None
) -> tuple[Term, int]:
    # exhaust the auxiliary steps; pure strategies take no t-steps, so
    # fuel 0 cannot be the reason they stop
    out = run(t, strategy, 0, cap_aux, max_state=max_state)
    if isinstance(out, Overflow):
        raise _SettleOverflow
    assert isinstance(out, Hnf)
    return out.result, out.aux_steps


def lockstep(
    u: Term,
    max_t: int,
    cap_aux: int | None = None,
    max_state: int | None = None,
) -> LockstepReport:
    """Run IT and JT on ``u`` in lockstep, comparing extraction images
    after each paired t-step.

    States are compared once each machine has taken its eager burst of
    I- or J-steps; those bursts do not move the image, so this checks
    the same equality as pausing immediately after the t-step.  A side
    that outgrows the state budget ends the run with the same verdicts
    as running out of paired steps.
    """
    si = sj = u
    ti = tj = 0
    aux_i = aux_j = 0
    checkpoints: list[Checkpoint] = []
    verdict: LockstepVerdict
    try:
        si, aux_i = _settle(u, Strategy.PURE_I, cap_aux, max_state)
        sj, aux_j = _settle(u, Strategy.PURE_J, cap_aux, max_state)
        while True:
            done_i, done_j = is_hnf(si), is_hnf(sj)
            if done_i and done_j:
                equal = alpha_eq(extract(si), extract(sj))
                verdict = BothHnf() if equal else EMismatch(ti)
                break
            if done_i != done_j:
                # one machine halted; spend the remaining budget on the other
                halted_at = ti if done_i else tj
                if done_i:
                    while tj < max_t and not is_hnf(sj):
                        sj = t_step(sj)
                        tj += 1
                        sj, a = _settle(sj, Strategy.PURE_J, cap_aux, max_state)
                        aux_j += a
                    verdict = BothHnf() if is_hnf(sj) else Diverged(halted_at)
                else:
                    while ti < max_t and not is_hnf(si):
                        si = t_step(si)
                        ti += 1
                        si, a = _settle(si, Strategy.PURE_I, cap_aux, max_state)
                        aux_i += a
                    verdict = BothHnf() if is_hnf(si) else Diverged(halted_at)
                break
            if ti >= max_t:
                verdict = BothRunning()
                break
            si = t_step(si)
            ti += 1
            si, a = _settle(si, Strategy.PURE_I, cap_aux, max_state)
            aux_i += a
            sj = t_step(sj)
            tj += 1
            sj, a = _settle(sj, Strategy.PURE_J, cap_aux, max_state)
            aux_j += a
            image_i, image_j = extract(si), extract(sj)
            equal = alpha_eq(image_i, image_j)
            checkpoints.append(Checkpoint(ti, image_i, image_j, equal))
            if not equal:
                verdict = EMismatch(ti)
                break
    except _SettleOverflow:
        done_i, done_j = is_hnf(si), is_hnf(sj)
        verdict = Diverged(ti if done_i else tj) if done_i != done_j else BothRunning()
    return LockstepReport(u, tuple(checkpoints), verdict, ti, tj, aux_i, aux_j)


# ---------- theorem harness ----------


@dataclass(frozen=True, slots=True)
class AgreementRow:
    context: Term
    verdict_i: MachineOutcome  # head reduction of context[I/H]
    verdict_j: MachineOutcome  # head reduction of context[J/H]
    verdict_it: MachineOutcome  # IT machine on the context itself
    verdict_jt: MachineOutcome  # JT machine on the context itself
    agree: bool

    @property
    def definite(self) -> bool:
        return solved(self.verdict_i) and solved(self.verdict_j)

    @property
    def bridge_i_ok(self) -> bool:
        return solved(self.verdict_it) == solved(self.verdict_i)

    @property
    def bridge_j_ok(self) -> bool:
        return solved(self.verdict_jt) == solved(self.verdict_j)


def theorem_check(
    u: Term,
    fuel: int,
    cap_aux: int | None = None,
    j_fuel_ratio: int = 20,
    max_state: int | None = None,
) -> AgreementRow:
    """All four verdicts for one context.

    Head reduction of U[J/H] simulates each J-step of the machine by a
    short burst of t-steps (unfolding the fixed point), so that side
    receives ``j_fuel_ratio`` times the fuel.  ``agree`` compares the
    two substitution verdicts; a fuel-exhausted side agrees vacuously,
    and both-unknown rows are tallied separately in reports.  A machine
    side that outgrows the state budget counts as unknown.
    """
    verdict_i = run(subst_const_h(u, I), Strategy.T_HEAD, fuel)
    verdict_j = run(subst_const_h(u, J), Strategy.T_HEAD, fuel * j_fuel_ratio)
    verdict_it = run(u, Strategy.IT, fuel, cap_aux, max_state=max_state)
    verdict_jt = run(u, Strategy.JT, fuel, cap_aux, max_state=max_state)
    agree = solved(verdict_i) == solved(verdict_j)
    return AgreementRow(u, verdict_i, verdict_j, verdict_it, verdict_jt, agree)


def _verdict_word(outcome: MachineOutcome) -> str:
    return "hnf" if solved(outcome) else "unknown"


def agreement_row_json(row: AgreementRow, free_vars: Sequence[str] = ()) -> str:
    return json.dumps(
        {
            "context": format_term(row.context, free_vars),
            "verdict_I": _verdict_word(row.verdict_i),
            "verdict_J": _verdict_word(row.verdict_j),
            "agree": row.agree,
            "t_steps_I": row.verdict_i.t_steps,
            "t_steps_J": row.verdict_j.t_steps,
        }
    )


def agreement_summary_json(rows: Sequence[AgreementRow]) -> str:
    definite = sum(1 for r in rows if r.definite)
    unknown = sum(1 for r in rows if not solved(r.verdict_i) and not solved(r.verdict_j))
    disagreements = sum(1 for r in rows if not r.agree)
    return json.dumps(
        {
            "contexts": len(rows),
            "definite": definite,
            "both_unknown": unknown,
            "disagreements": disagreements,
        }
    )


# ---------- corpus files ----------


@dataclass(frozen=True, slots=True)
class CorpusEntry:
    text: str
    free_vars: tuple[str, ...]
    term: Term


def read_corpus(
    path: str | PathLike, constants: dict[str, SourceTerm] | None = None
) -> list[CorpusEntry]:
    """One context per line; '#' starts a comment; blank lines ignored."""
    entries: list[CorpusEntry] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            term, names = parse_term(line, constants=constants)
            entries.append(CorpusEntry(line, names, term))
    return entries


# ---------- lifting a J-trace past appended arguments ----------


class InvalidTrace(Exception):
    pass


@dataclass(frozen=True, slots=True)
class LiftWitness:
    original: tuple[TraceEntry, ...]
    args: tuple[Term, ...]
    lifted: tuple[TraceEntry, ...]
    primed_args: tuple[Term, ...]
    residuals: tuple[tuple[TraceEntry, ...], ...]  # primed_args[k] -> args[k]


def replay_j_trace(entries: Sequence[TraceEntry]) -> None:
    """Check that a trace is a chained sequence of genuine J-steps."""
    previous: Term | None = None
    for i, entry in enumerate(entries):
        if entry.kind not in (StepKind.J_WRAP, StepKind.J_DROP):
            raise InvalidTrace(f"entry {i}: {entry.kind.value} is not a J-step")
        if previous is not None and entry.before != previous:
            raise InvalidTrace(f"entry {i}: does not chain with the previous step")
        view = spine(entry.before)
        if not (isinstance(view.head, HeadH) and view.args):
            raise InvalidTrace(f"entry {i}: head is not an applied H")
        expected_kind = StepKind.J_DROP if len(view.args) == 1 else StepKind.J_WRAP
        if entry.kind is not expected_kind:
            raise InvalidTrace(f"entry {i}: kind should be {expected_kind.value}")
        if j_step(entry.before) != entry.after:
            raise InvalidTrace(f"entry {i}: after-term is not the J-contraction")
        previous = entry.after


def lift_j_trace(
    trace: Sequence[TraceEntry], args: Sequence[Term]
) -> LiftWitness:
    """Append ``args`` to every state of a J-trace.

    A wrap step survives appending unchanged.  A drop step H U -> U
    turns into a wrap onto the first appended argument:

        H U W1 W2 .. Wn  ->  U (H W1) W2 .. Wn

    so after the whole trace the first argument has collected one H
    wrapper per drop step; the residual traces peel those wrappers off
    again, one drop each, which is what makes the primed arguments
    J-reduce back to the originals.

    Steps taken under a binder prefix have no head position left once
    arguments are appended, so such traces cannot be lifted and are
    rejected along with traces that do not replay.
    """
    entries = tuple(trace)
    arg_list = tuple(args)
    replay_j_trace(entries)
    if not arg_list:
        return LiftWitness(entries, arg_list, entries, arg_list, ())
    current = list(arg_list)
    lifted: list[TraceEntry] = []
    drops = 0
    for i, entry in enumerate(entries):
        if spine(entry.before).binders:
            raise InvalidTrace(
                f"entry {i}: a step under a binder prefix cannot be lifted"
            )
        before = apply_args(entry.before, current)
        if entry.kind is StepKind.J_DROP:
            current[0] = App(H, current[0])
            drops += 1
        after = apply_args(entry.after, current)
        lifted.append(TraceEntry(StepKind.J_WRAP, before, after, 0))
    # first argument: H^drops W1 -> ... -> W1 by repeated drops
    forms = [arg_list[0]]
    for _ in range(drops):
        forms.append(App(H, forms[-1]))
    first_residual = tuple(
        TraceEntry(StepKind.J_DROP, forms[m], forms[m - 1], 0)
        for m in range(drops, 0, -1)
    )
    residuals = (first_residual,) + tuple(() for _ in arg_list[1:])
    witness = LiftWitness(entries, arg_list, tuple(lifted), tuple(current), residuals)
    replay_j_trace(witness.lifted)
    for residual in witness.residuals:
        replay_j_trace(residual)
    return witness


# ---------- invariant suite ----------


_SKIP = object()

_PROBES: tuple[Term, ...] = (
    I,
    H,
    Abs(H),
    App(H, H),
    Abs(Abs(Var(1))),
    Abs(App(Var(0), H)),
)


@dataclass(slots=True)
class CheckResult:
    name: str
    group: str
    checked: int = 0
    skipped: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass(frozen=True, slots=True)
class SuiteReport:
    results: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def _show(t: Term) -> str:
    return format_term(t)


def _extract_idempotent(t: Term):
    image = extract(t)
    return None if extract(image) == image else _show(t)


def _extract_collapse(t: Term):
    base, args = unwind_app(t)
    if not args:
        return _SKIP
    image = extract(t)
    for split in range(len(args)):
        operator = apply_args(base, args[:split])
        rebuilt = apply_args(extract(operator), [extract(a) for a in args[split:]])
        if extract(rebuilt) != image:
            return f"{_show(t)} split at {split}"
    return None


def _extract_substitution(t: Term):
    if not isinstance(t, Abs):
        return _SKIP
    for value in _PROBES:
        lhs = extract(substitute(t.body, value))
        rhs = extract(substitute(extract(t.body), extract(value)))
        if lhs != rhs:
            return f"{_show(t)} with {_show(value)}"
    return None


def _extract_shape(t: Term):
    try:
        classify(extract(t))
    except ShapeViolation:
        return _show(t)
    return None


def _extract_no_applied_h(t: Term):
    return None if not has_applied_h(extract(t)) else _show(t)


def _make_pair_congruence(rng: random.Random) -> Callable:
    def check(t: Term):
        if not isinstance(t, Abs):
            return _SKIP
        left_body = t.body
        right_body = wrap_applied_h(left_body, rng)
        value = _PROBES[rng.randrange(len(_PROBES))]
        wrapped_value = wrap_applied_h(value, rng)
        lhs = extract(substitute(left_body, value))
        rhs = extract(substitute(right_body, wrapped_value))
        if lhs != rhs:
            return f"{_show(t)} with {_show(value)}"
        return None

    return check


def _i_step_invariant(t: Term):
    view = spine(t)
    if not (isinstance(view.head, HeadH) and view.args):
        return _SKIP
    stepped = i_step(t)
    if size(stepped) != size(t) - 2:
        return f"{_show(t)}: size {size(t)} -> {size(stepped)}"
    if extract(stepped) != extract(t):
        return f"{_show(t)}: image moved"
    return None


def _j_step_invariant(t: Term):
    view = spine(t)
    if not (isinstance(view.head, HeadH) and view.args):
        return _SKIP
    stepped = j_step(t)
    if extract(stepped) != extract(t):
        return f"{_show(t)}: image moved"
    return None


def _pure_i_terminates(t: Term):
    try:
        out = run(t, Strategy.PURE_I, 0, cap_aux=size(t) // 2 + 1, keep_trace=True)
    except AuxCapExceeded as exc:
        return f"{_show(t)}: {exc}"
    for entry in out.trace:
        if size(entry.after) != size(entry.before) - 2:
            return f"{_show(t)}: non-shrinking I-step"
    return None


def _pure_j_terminates(t: Term):
    try:
        out = run(t, Strategy.PURE_J, 0, cap_aux=10 * size(t), keep_trace=True)
    except AuxCapExceeded as exc:
        return f"{_show(t)}: {exc}"
    for entry in out.trace:
        if extract(entry.after) != extract(entry.before):
            return f"{_show(t)}: image moved"
    return None


def _make_paired_t_step(rng: random.Random) -> Callable:
    def check(t: Term):
        if not isinstance(spine(t).head, HeadRedex):
            return _SKIP
        partner = wrap_applied_h(t, rng, protect_head=True)
        if not isinstance(spine(partner).head, HeadRedex):
            return _SKIP
        if extract(t_step(t)) != extract(t_step(partner)):
            return f"{_show(t)} vs {_show(partner)}"
        return None

    return check


def _make_application_solvability(fuel: int) -> Callable:
    def check(t: Term):
        if not is_closed(t):
            return _SKIP
        first = solvable(t, fuel)
        if not solved(first):
            return _SKIP
        bigger = 2 * fuel + 100
        for value in (I, H):
            whole = solvable(App(t, value), bigger)
            via_hnf = solvable(App(first.result, value), bigger)
            if solved(whole) != solved(via_hnf):
                return f"{_show(t)} applied to {_show(value)}"
        return None

    return check


def _make_determinism(fuel: int) -> Callable:
    def check(t: Term):
        for strategy in (Strategy.IT, Strategy.JT):
            if run(t, strategy, fuel) != run(t, strategy, fuel):
                return f"{_show(t)} under {strategy.value}"
        return None

    return check


def _make_lockstep(max_t: int) -> Callable:
    def check(t: Term):
        report = lockstep(t, max_t)
        match report.verdict:
            case EMismatch(step):
                return f"{_show(t)}: image mismatch at t-step {step}"
            case Diverged(step):
                return f"{_show(t)}: one side halted at t-step {step}"
            case BothHnf() if report.t_steps_i != report.t_steps_j:
                return (
                    f"{_show(t)}: t-step counts differ "
                    f"({report.t_steps_i} vs {report.t_steps_j})"
                )
        return None

    return check


def _make_context_agreement(fuel: int) -> Callable:
    def check(t: Term):
        row = theorem_check(t, fuel)
        if not row.agree:
            return f"{_show(t)}: substitution verdicts disagree"
        if not row.bridge_i_ok:
            return f"{_show(t)}: IT machine disagrees with I-substitution"
        if not row.bridge_j_ok:
            return f"{_show(t)}: JT machine disagrees with J-substitution"
        return None

    return check


def _lift_replays(t: Term):
    out = run(t, Strategy.PURE_J, 0, cap_aux=10 * size(t) + 100, keep_trace=True)
    prefix = []
    for entry in out.trace:
        if spine(entry.before).binders:
            break
        prefix.append(entry)
    if not prefix:
        return _SKIP
    try:
        lift_j_trace(prefix, (I,))
    except InvalidTrace as exc:
        return f"{_show(t)}: {exc}"
    return None


def lemma_suite(
    corpus: Iterable[Term],
    *,
    seed: int = 0,
    fuel: int = 300,
    max_t: int = 50,
    groups: Sequence[str] | None = None,
) -> SuiteReport:
    """Evaluate every extraction, step, and equivalence invariant over a
    corpus.  A raised violation (shape, cap, replay) is recorded as a
    failure on the offending term rather than aborting the sweep.
    """
    terms = list(corpus)
    wanted = set(groups) if groups else {"extraction", "machines", "equivalence"}
    rng = random.Random(seed)
    checks: list[tuple[str, str, Callable]] = [
        ("extract_idempotent", "extraction", _extract_idempotent),
        ("extract_application_collapse", "extraction", _extract_collapse),
        ("extract_commutes_with_substitution", "extraction", _extract_substitution),
        ("extract_pair_congruence", "extraction", _make_pair_congruence(rng)),
        ("extract_image_shape", "extraction", _extract_shape),
        ("extract_no_applied_h", "extraction", _extract_no_applied_h),
        ("i_step_shrinks_and_preserves_image", "machines", _i_step_invariant),
        ("j_step_preserves_image", "machines", _j_step_invariant),
        ("pure_i_terminates", "machines", _pure_i_terminates),
        ("pure_j_terminates", "machines", _pure_j_terminates),
        ("paired_t_steps_preserve_image", "machines", _make_paired_t_step(rng)),
        ("application_solvability", "machines", _make_application_solvability(fuel)),
        ("machine_determinism", "machines", _make_determinism(fuel)),
        ("lockstep_images_agree", "equivalence", _make_lockstep(max_t)),
        ("context_agreement", "equivalence", _make_context_agreement(fuel)),
        ("lifted_j_traces_replay", "equivalence", _lift_replays),
    ]
    results: list[CheckResult] = []
    for name, group, fn in checks:
        if group not in wanted:
            continue
        result = CheckResult(name, group)
        for t in terms:
            try:
                outcome = fn(t)
            except Exception as exc:  # a violation surfacing as an error
                outcome = f"{_show(t)}: {type(exc).__name__}: {exc}"
            if outcome is _SKIP:
                result.skipped += 1
                continue
            result.checked += 1
            if outcome is not None:
                result.failed += 1
                if len(result.failures) < 4:
                    result.failures.append(outcome)
        results.append(result)
    return SuiteReport(tuple(results))
