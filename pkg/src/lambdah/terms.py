"""Core syntax: lambda terms with a reserved head constant H.

Terms are nameless (de Bruijn indices).  ``Var(0)`` is the innermost
binder; free variables of a term taken in context ``k`` are the indices
``depth .. depth + k - 1`` at each occurrence.  Alpha equivalence is
therefore plain structural equality.

The spine view decomposes a term as ``lam x1 .. xb. h a1 .. an`` where
the head ``h`` is a variable, the constant H, or a beta redex whose
operator is an abstraction.  Exactly one of the three cases applies, and
head normal forms are the terms whose head is a variable (any number of
arguments) or a bare H (no arguments at all: an applied H is work left
to do, not a result).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


# ---------- term constructors ----------


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class Abs:
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class ConstH:
    pass


Term = Var | Abs | App | ConstH

H = ConstH()


def alpha_eq(a: Term, b: Term) -> bool:
    """Alpha equivalence; on nameless terms this is structural equality."""
    return a == b


def size(t: Term) -> int:
    """Node count: every constructor, including H, costs one.

    Iterative: the machines probe the size of intermediate states, which
    can be far deeper than the recursion limit allows.
    """
    n = 0
    todo = [t]
    while todo:
        n += 1
        match todo.pop():
            case App(fun, arg):
                todo.append(fun)
                todo.append(arg)
            case Abs(body):
                todo.append(body)
    return n


def max_free_index(t: Term, depth: int = 0) -> int:
    """Largest free index relative to ``depth``, or -1 if t is closed."""
    match t:
        case Var(i):
            return i - depth if i >= depth else -1
        case Abs(body):
            return max_free_index(body, depth + 1)
        case App(fun, arg):
            return max(max_free_index(fun, depth), max_free_index(arg, depth))
        case _:
            return -1


def is_closed(t: Term) -> bool:
    return max_free_index(t) < 0


def is_well_scoped(t: Term, free_vars: int) -> bool:
    """True if every variable is bound or one of ``free_vars`` ambient indices."""
    return max_free_index(t) < free_vars


# ---------- application spine helpers ----------


def app_head(t: Term) -> Term:
    """Base of the iterated application t = base a1 .. an (no binder stripping)."""
    while isinstance(t, App):
        t = t.fun
    return t


def unwind_app(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Split t into its application base and argument list, left to right."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, tuple(args)


def apply_args(t: Term, args: Iterable[Term]) -> Term:
    for a in args:
        t = App(t, a)
    return t


# ---------- spine view ----------


@dataclass(frozen=True, slots=True)
class HeadVar:
    index: int


@dataclass(frozen=True, slots=True)
class HeadH:
    pass


@dataclass(frozen=True, slots=True)
class HeadRedex:
    fun: Term  # always an Abs
    arg: Term


Head = HeadVar | HeadH | HeadRedex


@dataclass(frozen=True, slots=True)
class SpineView:
    binders: int
    head: Head
    args: tuple[Term, ...]


def spine(t: Term) -> SpineView:
    """Decompose t as lam^binders. head args.

    After stripping the leading binders the term cannot itself be an
    abstraction, so an Abs found at the base of the application walk is
    necessarily applied to at least one argument: that application is
    the head redex.
    """
    binders = 0
    while isinstance(t, Abs):
        binders += 1
        t = t.body
    base, args = unwind_app(t)
    head: Head
    if isinstance(base, Var):
        head = HeadVar(base.index)
    elif isinstance(base, ConstH):
        head = HeadH()
    else:
        head = HeadRedex(base, args[0])
        args = args[1:]
    return SpineView(binders, head, args)


def recompose(view: SpineView) -> Term:
    match view.head:
        case HeadVar(i):
            t: Term = Var(i)
        case HeadH():
            t = H
        case HeadRedex(fun, arg):
            t = App(fun, arg)
    t = apply_args(t, view.args)
    for _ in range(view.binders):
        t = Abs(t)
    return t


def is_hnf(t: Term) -> bool:
    """Head normal form: head variable, or a bare H with no arguments."""
    view = spine(t)
    match view.head:
        case HeadVar(_):
            return True
        case HeadH():
            return not view.args
        case _:
            return False


# ---------- substitution ----------


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every variable index >= cutoff (free at that depth)."""
    match t:
        case Var(i):
            return Var(i + by) if i >= cutoff else t
        case Abs(body):
            return Abs(shift(body, by, cutoff + 1))
        case App(fun, arg):
            return App(shift(fun, by, cutoff), shift(arg, by, cutoff))
        case _:
            return t


def _subst(t: Term, depth: int, value: Term) -> Term:
    match t:
        case Var(i):
            if i == depth:
                return shift(value, depth)
            # one binder disappears, so free indices above it slide down
            return Var(i - 1) if i > depth else t
        case Abs(body):
            return Abs(_subst(body, depth + 1, value))
        case App(fun, arg):
            return App(_subst(fun, depth, value), _subst(arg, depth, value))
        case _:
            return t


def substitute(body: Term, value: Term) -> Term:
    """Capture-avoiding beta substitution: body with its index 0 replaced.

    This is the contraction of ``App(Abs(body), value)``.  The value is
    shifted past every binder it is carried under, and the indices that
    pointed past the consumed binder are decremented.
    """
    return _subst(body, 0, value)


def subst_const_h(t: Term, m: Term) -> Term:
    """Replace every occurrence of the constant H by the closed term m."""
    if not is_closed(m):
        raise ValueError("replacement for H must be closed")

    def go(t: Term) -> Term:
        match t:
            case ConstH():
                return m
            case Abs(body):
                return Abs(go(body))
            case App(fun, arg):
                return App(go(fun), go(arg))
            case _:
                return t

    return go(t)
