"""Surface syntax: parsing and printing of named lambda terms.

Grammar::

    term  := abs | app
    abs   := ("\\" | "λ") ident+ "." term
    app   := atom atom*
    atom  := ident | "H" | "(" term ")"
    ident := lowercase letter, then letters or digits

Application is left associative and an abstraction body extends as far
right as possible, so an abstraction used as an operator or argument
must be parenthesised.  "H" is reserved for the head constant and is
not a valid identifier or binder.  "#" starts a comment that runs to
the end of the line.

``parse`` produces a named tree (``SourceTerm``); ``to_debruijn``
resolves names against a declared list of free variables, where the
i-th declared name maps to index depth + i at each occurrence.  The
printer emits minimal parentheses and uses backslash for lambda, and
printing then re-parsing is the identity on nameless terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .terms import Abs, App, ConstH, H, Term, Var


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class UnboundVariable(Exception):
    def __init__(self, name: str):
        super().__init__(f"unbound variable: {name}")
        self.name = name


# ---------- named trees ----------


@dataclass(frozen=True, slots=True)
class SVar:
    name: str


@dataclass(frozen=True, slots=True)
class SAbs:
    param: str
    body: "SourceTerm"


@dataclass(frozen=True, slots=True)
class SApp:
    fun: "SourceTerm"
    arg: "SourceTerm"


@dataclass(frozen=True, slots=True)
class SConstH:
    pass


SourceTerm = SVar | SAbs | SApp | SConstH


# ---------- tokenizer ----------


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # lambda | dot | lparen | rparen | ident | consth | upper | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if c in "\\λ":
            tokens.append(_Token("lambda", c, line, start_col))
            i += 1
            col += 1
            continue
        if c == ".":
            tokens.append(_Token("dot", c, line, start_col))
            i += 1
            col += 1
            continue
        if c == "(":
            tokens.append(_Token("lparen", c, line, start_col))
            i += 1
            col += 1
            continue
        if c == ")":
            tokens.append(_Token("rparen", c, line, start_col))
            i += 1
            col += 1
            continue
        if c.isalpha():
            j = i + 1
            while j < n and text[j].isalnum():
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            if word == "H":
                tokens.append(_Token("consth", word, line, start_col))
            elif word[0].islower():
                tokens.append(_Token("ident", word, line, start_col))
            else:
                tokens.append(_Token("upper", word, line, start_col))
            continue
        raise ParseError(f"unexpected character {c!r}", line, start_col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------- parser ----------


_ATOM_STARTS = {"ident", "consth", "upper", "lparen"}


class _Parser:
    def __init__(self, tokens: list[_Token], constants: Mapping[str, SourceTerm]):
        self.tokens = tokens
        self.pos = 0
        self.constants = constants

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return tok

    def term(self) -> SourceTerm:
        if self.peek().kind == "lambda":
            return self.abstraction()
        return self.application()

    def abstraction(self) -> SourceTerm:
        self.next()  # lambda
        params = [self.expect("ident", "binder name").text]
        while self.peek().kind == "ident":
            params.append(self.next().text)
        self.expect("dot", "'.'")
        body = self.term()
        for p in reversed(params):
            body = SAbs(p, body)
        return body

    def application(self) -> SourceTerm:
        t = self.atom()
        while self.peek().kind in _ATOM_STARTS:
            t = SApp(t, self.atom())
        nxt = self.peek()
        if nxt.kind == "lambda":
            raise ParseError(
                "abstraction in argument position must be parenthesised",
                nxt.line,
                nxt.col,
            )
        return t

    def atom(self) -> SourceTerm:
        tok = self.next()
        if tok.kind == "ident":
            return SVar(tok.text)
        if tok.kind == "consth":
            return SConstH()
        if tok.kind == "upper":
            if tok.text in self.constants:
                return self.constants[tok.text]
            raise ParseError(f"unknown constant {tok.text!r}", tok.line, tok.col)
        if tok.kind == "lparen":
            t = self.term()
            self.expect("rparen", "')'")
            return t
        shown = tok.text or "end of input"
        raise ParseError(f"expected a term, found {shown!r}", tok.line, tok.col)


def parse(text: str, constants: Mapping[str, SourceTerm] | None = None) -> SourceTerm:
    """Parse a named term.

    ``constants`` optionally maps reserved uppercase words to closed
    source trees that are spliced in where the word appears; the core
    grammar itself admits only "H".
    """
    parser = _Parser(_tokenize(text), constants or {})
    t = parser.term()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.col)
    return t


# ---------- name resolution ----------


def free_names(source: SourceTerm) -> tuple[str, ...]:
    """Free identifiers in first-occurrence order."""
    seen: list[str] = []

    def go(s: SourceTerm, bound: tuple[str, ...]) -> None:
        match s:
            case SVar(name):
                if name not in bound and name not in seen:
                    seen.append(name)
            case SAbs(param, body):
                go(body, (param,) + bound)
            case SApp(fun, arg):
                go(fun, bound)
                go(arg, bound)
            case SConstH():
                pass

    go(source, ())
    return tuple(seen)


def to_debruijn(source: SourceTerm, free_vars: Sequence[str] = ()) -> Term:
    """Resolve names to indices; declared free name i becomes depth + i."""
    free = list(free_vars)

    def go(s: SourceTerm, env: list[str]) -> Term:
        match s:
            case SVar(name):
                if name in env:
                    return Var(env.index(name))  # innermost binder wins
                if name in free:
                    return Var(len(env) + free.index(name))
                raise UnboundVariable(name)
            case SAbs(param, body):
                return Abs(go(body, [param] + env))
            case SApp(fun, arg):
                return App(go(fun, env), go(arg, env))
            case _:
                return H

    return go(source, [])


_BINDER_LETTERS = "xyzwustabc"  # no "v": synthetic free names are v0, v1, ...


def _binder_names(avoid: set[str]) -> Iterator[str]:
    for name in _BINDER_LETTERS:
        if name not in avoid:
            yield name
    suffix = 1
    while True:
        for letter in _BINDER_LETTERS:
            name = f"{letter}{suffix}"
            if name not in avoid:
                yield name
        suffix += 1


def from_debruijn(t: Term, free_vars: Sequence[str] = ()) -> SourceTerm:
    """Name a term.  Free index depth + i takes the i-th declared name, or
    a synthetic ``v{i}`` beyond the declared list.  Binder names are drawn
    from a fixed supply, skipping everything already in scope, so the
    result re-parses to exactly ``t``.
    """
    free = list(free_vars)
    avoid = set(free)
    supply = _binder_names(avoid)

    def go(t: Term, env: list[str]) -> SourceTerm:
        match t:
            case Var(i):
                if i < len(env):
                    return SVar(env[i])
                j = i - len(env)
                return SVar(free[j]) if j < len(free) else SVar(f"v{j}")
            case Abs(body):
                name = next(supply)
                return SAbs(name, go(body, [name] + env))
            case App(fun, arg):
                return SApp(go(fun, env), go(arg, env))
            case _:
                return SConstH()

    return go(t, [])


# ---------- printer ----------


def print_source(s: SourceTerm) -> str:
    def fmt(s: SourceTerm, pos: str) -> str:  # pos: top | fun | arg
        match s:
            case SVar(name):
                return name
            case SConstH():
                return "H"
            case SAbs(_, _):
                params: list[str] = []
                body = s
                while isinstance(body, SAbs):
                    params.append(body.param)
                    body = body.body
                text = "\\" + " ".join(params) + "." + fmt(body, "top")
                return text if pos == "top" else f"({text})"
            case SApp(fun, arg):
                text = fmt(fun, "fun") + " " + fmt(arg, "arg")
                return text if pos != "arg" else f"({text})"

    return fmt(s, "top")


def format_term(t: Term, free_vars: Sequence[str] = ()) -> str:
    return print_source(from_debruijn(t, free_vars))


def parse_term(
    text: str,
    free_vars: Sequence[str] | None = None,
    constants: Mapping[str, SourceTerm] | None = None,
) -> tuple[Term, tuple[str, ...]]:
    """Parse straight to a nameless term.

    When ``free_vars`` is None the free identifiers are declared
    implicitly in first-occurrence order; the declaration actually used
    is returned alongside the term so output can reuse the same names.
    """
    source = parse(text, constants)
    names = tuple(free_vars) if free_vars is not None else free_names(source)
    return to_debruijn(source, names), names
