"""Reader and printer for the clause language.

The accepted subset is deliberately small: facts and rules over compound
terms, with `%` line comments.  Lowercase identifiers and integers are
functors, uppercase or underscore identifiers are variables, and there are
no operators, lists, strings, cut, or negation.  Anything outside the
subset is rejected with a position-carrying ParseError rather than being
guessed at.

Each `_` stands for a distinct variable.  Occurrences are named `_1`,
`_2`, ... (skipping names the clause already uses) so they stay apart
from each other, from user-written variables, and from every renamed
clause instance, which only ever carries serials >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    RESERVED_INDICATORS,
    Atom,
    Clause,
    Compound,
    Program,
    Substitution,
    Term,
    Variable,
    apply,
    restrict,
    vars_of,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SourceProgram:
    text: str
    origin: str = "<inline>"


@dataclass(frozen=True)
class Query:
    """A parsed goal list plus the user variable names in first-occurrence
    order, which fixes how answers are printed."""

    atoms: tuple[Atom, ...]
    originals: tuple[str, ...]


@dataclass(frozen=True)
class _Token:
    kind: str  # name | var | int | punct | arrow | eof
    text: str
    line: int
    col: int


def _scan(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c == ":":
            if text[i : i + 2] == ":-":
                tokens.append(_Token("arrow", ":-", start_line, start_col))
                i += 2
                col += 2
                continue
            raise ParseError("expected ':-'", line, col)
        if c in "(),.":
            tokens.append(_Token("punct", c, start_line, start_col))
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "name" if c.islower() else "var"
            tokens.append(_Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


_ANON = "\x00anon"  # placeholder prefix, unreachable from source text


class _Parser:
    def __init__(self, text: str):
        self.tokens = _scan(text)
        self.pos = 0
        # per-clause state
        self.scope: dict[str, Variable] = {}
        self.anon_count = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok.line, tok.col)
        return self.next()

    def begin_clause(self):
        self.scope = {}
        self.anon_count = 0

    def variable(self, tok: _Token) -> Variable:
        if tok.text == "_":
            self.anon_count += 1
            v = Variable(f"{_ANON}{self.anon_count}", 0)
            self.scope[v.name] = v
            return v
        v = self.scope.get(tok.text)
        if v is None:
            v = Variable(tok.text, 0)
            self.scope[tok.text] = v
        return v

    def term(self) -> Term:
        tok = self.next()
        if tok.kind == "var":
            return self.variable(tok)
        if tok.kind == "int":
            return Compound(tok.text, ())
        if tok.kind == "name":
            return Compound(tok.text, self.maybe_args())
        raise ParseError(f"expected a term, found {tok.text!r}", tok.line, tok.col)

    def maybe_args(self) -> tuple[Term, ...]:
        if self.peek().kind == "punct" and self.peek().text == "(":
            self.next()
            args = [self.term()]
            while self.peek().text == "," and self.peek().kind == "punct":
                self.next()
                args.append(self.term())
            self.expect("punct", ")")
            return tuple(args)
        return ()

    def atom(self, where: str) -> Atom:
        tok = self.expect("name")
        a = Atom(tok.text, self.maybe_args())
        if a.indicator in RESERVED_INDICATORS:
            raise ParseError(
                f"reserved predicate {a.predicate}/{len(a.args)} cannot appear in {where}",
                tok.line,
                tok.col,
            )
        if where == "a clause head" and a.indicator == ("rtrace", 0):
            raise ParseError("rtrace/0 is built in and cannot be redefined", tok.line, tok.col)
        return a

    def atom_list(self, where: str) -> list[Atom]:
        atoms = [self.atom(where)]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            atoms.append(self.atom(where))
        return atoms

    def finish_clause_vars(self, atoms: list[Atom]) -> tuple[list[Atom], list[str]]:
        """Give anonymous placeholders their final `_k` names and report the
        named user variables in first-occurrence order."""
        named = [n for n in self.scope if not n.startswith(_ANON)]
        taken = set(named)
        renaming: dict[Variable, Term] = {}
        k = 1
        for n, v in self.scope.items():
            if not n.startswith(_ANON):
                continue
            while f"_{k}" in taken:
                k += 1
            taken.add(f"_{k}")
            renaming[v] = Variable(f"_{k}", 0)
            k += 1
        if renaming:
            sub = Substitution(renaming)
            atoms = [apply(a, sub) for a in atoms]
        return atoms, named


def parse_program(src: SourceProgram | str) -> Program:
    """Parse clauses into a Program; labels are l1, l2, ... in source order."""
    text = src.text if isinstance(src, SourceProgram) else src
    p = _Parser(text)
    clauses: list[Clause] = []
    while p.peek().kind != "eof":
        p.begin_clause()
        head = p.atom("a clause head")
        body: list[Atom] = []
        if p.peek().kind == "arrow":
            p.next()
            body = p.atom_list("a clause body")
        p.expect("punct", ".")
        atoms, _named = p.finish_clause_vars([head] + body)
        clauses.append(Clause(f"l{len(clauses) + 1}", atoms[0], tuple(atoms[1:])))
    return Program(clauses)


def parse_query(text: str) -> Query:
    """Parse a comma-separated goal list.  A trailing '.' is tolerated."""
    p = _Parser(text)
    p.begin_clause()
    tok = p.peek()
    if tok.kind == "eof":
        raise ParseError("empty query", tok.line, tok.col)
    atoms = p.atom_list("a query")
    if p.peek().kind == "punct" and p.peek().text == ".":
        p.next()
    tail = p.peek()
    if tail.kind != "eof":
        raise ParseError(f"unexpected {tail.text!r} after query", tail.line, tail.col)
    atoms, named = p.finish_clause_vars(atoms)
    return Query(tuple(atoms), tuple(named))


# ---------------------------------------------------------------------------
# printing


class VariableNamer:
    """Stable display indexes for engine-generated variables.

    A renamed variable prefers its own serial as the index; when two
    variables share a serial the later one slides up to the next free
    number.  One namer per debugging session keeps lines consistent with
    each other.
    """

    def __init__(self):
        self._by_var: dict[Variable, int] = {}
        self._used: set[int] = set()

    def index(self, v: Variable) -> int:
        k = self._by_var.get(v)
        if k is None:
            k = v.serial
            while k in self._used:
                k += 1
            self._by_var[v] = k
            self._used.add(k)
        return k


def format_term(t: Term, namer: VariableNamer | None = None) -> str:
    if namer is None:
        namer = VariableNamer()
    if isinstance(t, Variable):
        return t.name if t.serial == 0 else f"_G{namer.index(t)}"
    if not t.args:
        return t.functor
    return f"{t.functor}({','.join(format_term(a, namer) for a in t.args)})"


def format_atom(a: Atom, namer: VariableNamer | None = None) -> str:
    if namer is None:
        namer = VariableNamer()
    if not a.args:
        return a.predicate
    return f"{a.predicate}({','.join(format_term(t, namer) for t in a.args)})"


def format_goals(atoms, namer: VariableNamer | None = None) -> str:
    if namer is None:
        namer = VariableNamer()
    return ",".join(format_atom(a, namer) for a in atoms)


def format_bindings(theta: Substitution, namer: VariableNamer | None = None) -> str:
    """Equational rendering in the substitution's own order: "A = b, B = c"."""
    if namer is None:
        namer = VariableNamer()
    return ", ".join(
        f"{format_term(v, namer)} = {format_term(t, namer)}" for v, t in theta.items()
    )


def answer_bindings(theta: Substitution, query: Query) -> Substitution:
    """Project a final substitution onto the query's reported variables, in
    first-occurrence order."""
    narrowed = restrict(theta, vars_of(query.atoms))
    ordered: dict[Variable, Term] = {}
    for name in query.originals:
        v = Variable(name, 0)
        t = narrowed.get(v)
        if t is not None:
            ordered[v] = t
    return Substitution(ordered)


def format_answer(theta: Substitution, query: Query, namer: VariableNamer | None = None) -> str:
    text = format_bindings(answer_bindings(theta, query), namer)
    return text or "true"


def render_clause(c: Clause) -> str:
    if not c.body:
        return f"{format_atom(c.head)}."
    return f"{format_atom(c.head)} :- {format_goals(c.body)}."


def render_program(p: Program) -> str:
    return "\n".join(render_clause(c) for c in p.clauses) + "\n"
