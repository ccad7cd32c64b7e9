"""Head reduction workbench for lambda terms with a reserved constant H.

The constant H can be read as the identity combinator I or as its
unbounded eta expansion J; the machines, extraction map, and lockstep
comparison in this package mechanise the checks that the two readings
are operationally interchangeable.
"""

from .equivalence import (
    AgreementRow,
    BothHnf,
    BothRunning,
    Checkpoint,
    CorpusEntry,
    Diverged,
    EMismatch,
    InvalidTrace,
    LiftWitness,
    LockstepReport,
    SuiteReport,
    lemma_suite,
    lift_j_trace,
    lockstep,
    read_corpus,
    replay_j_trace,
    solved,
    theorem_check,
)
from .extraction import EShape, ShapeViolation, classify, extract, has_applied_h
from .gen import (
    GenConfig,
    enumerate_terms,
    pair_stream,
    random_pair_equal_e,
    random_term,
    term_stream,
    wrap_applied_h,
)
from .machines import (
    G,
    I,
    J,
    OMEGA,
    AuxCapExceeded,
    FuelExhausted,
    Hnf,
    MachineOutcome,
    NotAJRedex,
    NotAnIRedex,
    NotATRedex,
    Overflow,
    StepKind,
    Strategy,
    TraceEntry,
    Y,
    i_step,
    j_step,
    run,
    solvable,
    t_step,
)
from .syntax import (
    ParseError,
    UnboundVariable,
    format_term,
    free_names,
    from_debruijn,
    parse,
    parse_term,
    to_debruijn,
)
from .terms import (
    Abs,
    App,
    ConstH,
    H,
    Head,
    HeadH,
    HeadRedex,
    HeadVar,
    SpineView,
    Term,
    Var,
    alpha_eq,
    app_head,
    apply_args,
    is_closed,
    is_hnf,
    is_well_scoped,
    max_free_index,
    recompose,
    shift,
    size,
    spine,
    subst_const_h,
    substitute,
    unwind_app,
)

__all__ = [
    "Abs", "AgreementRow", "App", "AuxCapExceeded", "BothHnf", "BothRunning",
    "Checkpoint", "ConstH", "CorpusEntry", "Diverged", "EMismatch", "EShape",
    "FuelExhausted", "G", "GenConfig", "H", "Head", "HeadH", "HeadRedex",
    "HeadVar", "Hnf", "I", "InvalidTrace", "J", "LiftWitness", "LockstepReport",
    "MachineOutcome", "NotAJRedex", "NotATRedex", "NotAnIRedex", "OMEGA",
    "ParseError", "ShapeViolation", "SpineView", "StepKind", "Strategy",
    "SuiteReport", "Term", "TraceEntry", "UnboundVariable", "Var", "Y",
    "alpha_eq", "app_head", "apply_args", "classify", "enumerate_terms",
    "extract", "format_term", "free_names", "from_debruijn", "has_applied_h",
    "i_step", "is_closed", "is_hnf", "is_well_scoped", "j_step", "lemma_suite",
    "lift_j_trace", "lockstep", "max_free_index", "pair_stream", "parse",
    "parse_term", "random_pair_equal_e", "random_term", "read_corpus",
    "recompose", "replay_j_trace", "run", "shift", "size", "solvable", "solved",
    "spine", "subst_const_h", "substitute", "t_step", "term_stream",
    "theorem_check", "to_debruijn", "unwind_app", "wrap_applied_h",
]
