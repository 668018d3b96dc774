"""Concrete syntax: lexer, parsers and printers.

Term grammar::

    term  ::= '\\' x ':' term '.' term | '!' x ':' term '.' term | arrow
    arrow ::= app ['->' term]
    app   ::= atom atom*
    atom  ::= ident | '(' term ')'

Identifiers are classified as sort, constant or variable from the active
specification and signature, in that order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from lpimod.rewriting import RewriteRule, Signature
from lpimod.specification import TAU, Specification, SpecError
from lpimod.syntax import (
    EMPTY,
    Abs,
    App,
    BVar,
    Const,
    Context,
    Prod,
    Sort,
    Term,
    Var,
    constants,
    fresh_name,
    free_vars,
    occurs_bound,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<rewrites>-->|↝)
  | (?P<leadsto>~>)
  | (?P<arrow>->|→)
  | (?P<lam>\\|λ)
  | (?P<pi>!|Π)
  | (?P<tau>@tau\b)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<punct>[():.,\[\]])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(Token(lexeme if kind == "punct" else kind, lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class Parser:
    def __init__(self, text: str, sorts: Iterable[str] = (), consts: Iterable[str] = ()):
        self.tokens = tokenize(text)
        self.i = 0
        self.sorts = set(sorts)
        self.consts = set(consts)
        self.scope: list[str] = []

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, kind: str) -> bool:
        return self.tok.kind == kind

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        if not self.at(kind):
            self.error(f"expected {what or repr(kind)}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def at_eof(self) -> bool:
        return self.at("eof")

    # -- terms ---------------------------------------------------------------

    def binder_name(self) -> str:
        tok = self.expect("ident", "a variable name")
        if tok.text in self.sorts or tok.text in self.consts:
            self.error(f"{tok.text} is a sort or constant and cannot be bound", tok)
        return tok.text

    def term(self) -> Term:
        if self.at("lam") or self.at("pi"):
            kind = self.advance().kind
            name = self.binder_name()
            self.expect(":")
            ty = self.term()
            self.expect(".")
            self.scope.append(name)
            try:
                body = self.term()
            finally:
                self.scope.pop()
            return Abs(name, ty, body) if kind == "lam" else Prod(name, ty, body)
        left = self.app()
        if self.at("arrow"):
            self.advance()
            self.scope.append("_")
            try:
                right = self.term()
            finally:
                self.scope.pop()
            return Prod("_", left, right)
        return left

    def starts_atom(self) -> bool:
        return self.tok.kind in ("ident", "(", "tau")

    def app(self) -> Term:
        if not self.starts_atom():
            self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")
        t = self.atom()
        while self.starts_atom():
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.advance()
        if tok.kind == "(":
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "tau":
            if TAU not in self.sorts:
                self.error(f"{TAU} is reserved for minimal completions", tok)
            return Sort(TAU)
        name = tok.text
        if name in self.sorts:
            return Sort(name)
        if name in self.consts:
            return Const(name)
        for k, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return BVar(k)
        return Var(name)

    def whole_term(self) -> Term:
        t = self.term()
        if not self.at_eof():
            self.error(f"unexpected {self.tok.text!r} after term")
        return t

    # -- declarations ----------------------------------------------------------

    def decl(self) -> tuple[str, Term]:
        tok = self.expect("ident", "a name")
        if tok.text in self.sorts:
            self.error(f"{tok.text} is a sort and cannot be declared", tok)
        self.expect(":")
        return tok.text, self.term()


def _sorts_of(spec: Specification | None) -> frozenset[str]:
    return spec.sorts if spec is not None else frozenset()


def parse_term(
    text: str,
    spec: Specification | None = None,
    signature: Signature | None = None,
) -> Term:
    consts = signature.names() if signature is not None else ()
    return Parser(text, _sorts_of(spec), consts).whole_term()


def parse_context(
    text: str,
    spec: Specification | None = None,
    signature: Signature | None = None,
) -> Context:
    """Declarations ``x : T`` separated by ``,`` or terminated by ``.``.

    ``·`` on its own is the empty context, as printed.
    """
    if text.strip() == "·":
        return EMPTY
    consts = signature.names() if signature is not None else ()
    p = Parser(text, _sorts_of(spec), consts)
    decls = []
    while not p.at_eof():
        tok = p.tok
        name, ty = p.decl()
        if any(name == n for n, _ in decls):
            p.error(f"duplicate declaration of {name}", tok)
        decls.append((name, ty))
        if p.at(",") or p.at("."):
            p.advance()
        elif not p.at_eof():
            p.error(f"expected ',' or '.', found {p.tok.text!r}")
    return Context(decls)


def parse_signature(text: str, base: Signature | None = None) -> Signature:
    """Signature file: ``name : T.`` declarations and ``[x:A, ...] l --> r.`` rules.

    Sorts are the fixed lambda-Pi sorts ``Type`` and ``Kind``.
    """
    decls = list(base.decls) if base is not None else []
    rules = list(base.rules) if base is not None else []
    p = Parser(text, ("Type", "Kind"), (n for n, _ in decls))
    while not p.at_eof():
        if p.at("["):
            start = p.tok
            p.advance()
            delta = []
            while not p.at("]"):
                name, ty = p.decl()
                if name in p.consts:
                    p.error(f"rule variable {name} clashes with a constant", start)
                delta.append((name, ty))
                if not p.at("]"):
                    p.expect(",")
            p.advance()
            lhs = p.term()
            p.expect("rewrites", "'-->'")
            rhs = p.term()
            p.expect(".")
            rules.append(RewriteRule(Context(delta), lhs, rhs, f"r{len(rules)}"))
        else:
            tok = p.tok
            name, ty = p.decl()
            if name in p.consts:
                p.error(f"{name} is already declared", tok)
            p.expect(".")
            decls.append((name, ty))
            p.consts.add(name)
    return Signature(Context(decls), tuple(rules))


_SPEC_LINE = {
    "sort": re.compile(r"sort\s+(\S+)\Z"),
    "axiom": re.compile(r"axiom\s+(\S+)\s*:\s*(\S+)\Z"),
    "rule": re.compile(r"rule\s*\(\s*([^,\s]+)\s*,\s*([^,\s)]+)\s*\)\s*(?:~>\s*(\S+))?\Z"),
}


def parse_spec(text: str, name: str = "") -> Specification:
    sorts, axioms, rules = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword = line.split()[0]
        rx = _SPEC_LINE.get(keyword)
        m = rx.match(line) if rx else None
        if m is None:
            raise ParseError(f"cannot parse specification line {line!r}", lineno, 1)
        if keyword == "sort":
            sorts.append(m.group(1))
        elif keyword == "axiom":
            axioms.append((m.group(1), m.group(2)))
        else:
            s1, s2, s3 = m.groups()
            rules.append((s1, s2, s3 or s2))
    for s in sorts + [x for a in axioms for x in a] + [x for r in rules for x in r]:
        if s == TAU:
            raise SpecError(f"{TAU} is reserved for minimal completions")
    return Specification.build(sorts, axioms, rules, name)


# ---------------------------------------------------------------------------
# Printing


def _sorts_in(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        match stack.pop():
            case Sort(n):
                out.add(n)
            case App(f, a):
                stack += (f, a)
            case Abs(_, ty, body) | Prod(_, ty, body):
                stack += (ty, body)
    return out


class _Printer:
    def __init__(self, avoid: set[str]):
        self.avoid = avoid

    def go(self, t: Term, scope: list[str], level: int) -> str:
        match t:
            case Sort(n) | Var(n) | Const(n):
                return n
            case BVar(i):
                return scope[-1 - i] if i < len(scope) else f"#{i}"
            case App():
                s = f"{self.go(t.fun, scope, 2)} {self.go(t.arg, scope, 3)}"
                return f"({s})" if level > 2 else s
            case Prod(h, ty, body) if not occurs_bound(body):
                s = f"{self.go(ty, scope, 2)} -> {self.go(body, scope + ['_'], 1)}"
                return f"({s})" if level > 1 else s
            case Abs(h, ty, body) | Prod(h, ty, body):
                name = fresh_name(h, self.avoid | set(scope))
                binder = "\\" if isinstance(t, Abs) else "!"
                s = f"{binder}{name}:{self.go(ty, scope, 0)}. {self.go(body, scope + [name], 0)}"
                return f"({s})" if level > 0 else s
        return repr(t)


def print_term(t: Term, reserved: Iterable[str] = ()) -> str:
    avoid = set(reserved) | free_vars(t) | constants(t) | _sorts_in(t)
    return _Printer(avoid).go(t, [], 0)


def print_context(ctx: Context, sep: str = ", ") -> str:
    if not len(ctx):
        return "·"
    return sep.join(f"{x} : {print_term(a)}" for x, a in ctx)


def print_rule(rule: RewriteRule) -> str:
    delta = ", ".join(f"{x} : {print_term(a)}" for x, a in rule.delta)
    return f"[{delta}] {print_term(rule.lhs)} --> {print_term(rule.rhs)}."


def print_signature(sig: Signature) -> str:
    lines = [f"{x} : {print_term(a)}." for x, a in sig.decls]
    lines += [print_rule(r) for r in sig.rules]
    return "\n".join(lines)


def print_spec(spec: Specification) -> str:
    def key(s: str):
        return (s == TAU, s)

    lines = [f"sort {s}" for s in sorted(spec.sorts, key=key)]
    lines += [f"axiom {a} : {b}" for a, b in sorted(spec.axioms.items(), key=lambda kv: key(kv[0]))]
    lines += [
        f"rule ({a}, {b}) ~> {c}"
        for (a, b), c in sorted(spec.rules.items(), key=lambda kv: (key(kv[0][0]), key(kv[0][1])))
    ]
    return "\n".join(lines)


__all__ = [
    "EMPTY",
    "ParseError",
    "parse_context",
    "parse_signature",
    "parse_spec",
    "parse_term",
    "print_context",
    "print_rule",
    "print_signature",
    "print_spec",
    "print_term",
    "tokenize",
]
