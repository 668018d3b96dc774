"""Rewrite rules, first-order pattern matching and signatures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from lpimod.syntax import (
    EMPTY,
    App,
    Const,
    Context,
    Term,
    Var,
    apps,
    free_vars,
    positions,
    replace_at,
    spine,
    subterm_at,
    substitute_many,
)


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    """``[delta] lhs --> rhs``; rule variables are the free variables of lhs."""

    delta: Context
    lhs: Term
    rhs: Term
    name: str = ""

    @property
    def head(self) -> str:
        return spine(self.lhs)[0].name

    @property
    def arity(self) -> int:
        return len(spine(self.lhs)[1])

    def __str__(self) -> str:
        from lpimod.surface import print_rule

        return print_rule(self)


def check_rule_shape(rule: RewriteRule) -> None:
    """Free-variable condition, left-linearity and the pattern class."""
    lhs_vars = free_vars(rule.lhs)
    extra = free_vars(rule.rhs) - lhs_vars
    if extra:
        raise RuleError(f"free-variable condition violated: {', '.join(sorted(extra))} not in FV(lhs)")
    undeclared = lhs_vars - set(rule.delta.names())
    if undeclared:
        raise RuleError(f"pattern variables {', '.join(sorted(undeclared))} are not declared in the rule context")
    head, _ = spine(rule.lhs)
    if not isinstance(head, Const):
        raise RuleError("left-hand side must be a constant applied to arguments")
    seen: set[str] = set()

    def walk(p: Term) -> None:
        match p:
            case Var(n):
                if n in seen:
                    raise RuleError(f"pattern variable {n} occurs twice (rules must be left-linear)")
                seen.add(n)
            case Const(_):
                pass
            case App(f, a):
                walk(f)
                walk(a)
            case _:
                raise RuleError("patterns may only contain constants, rule variables and applications")

    walk(rule.lhs)


def match_pattern(lhs: Term, subject: Term) -> dict[str, Term] | None:
    """Syntactic first-order match; every free variable of ``lhs`` is a hole."""
    sigma: dict[str, Term] = {}
    return sigma if _match(lhs, subject, sigma, None) else None


def _match(p: Term, t: Term, sigma: dict, reduce: Callable[[Term], Term] | None) -> bool:
    if isinstance(p, Var):
        if p.name in sigma:
            return sigma[p.name] == t
        sigma[p.name] = t
        return True
    if reduce is not None:
        t = reduce(t)
    ph, pargs = spine(p)
    th, targs = spine(t)
    if not isinstance(th, Const) or th != ph or len(pargs) != len(targs):
        return False
    return all(_match(pa, ta, sigma, reduce) for pa, ta in zip(pargs, targs))


class RuleIndex:
    """Rules grouped by head constant, in signature order."""

    def __init__(self, rules: Iterable[RewriteRule] = ()):
        self.rules = tuple(rules)
        self.by_head: dict[str, list[RewriteRule]] = {}
        for r in self.rules:
            self.by_head.setdefault(r.head, []).append(r)

    def __bool__(self) -> bool:
        return bool(self.rules)

    def rewrite_head(self, t: Term, reduce: Callable[[Term], Term] | None = None) -> Term | None:
        """Apply the first rule matching ``t`` at its root.

        With ``reduce`` the arguments are weak-head reduced on demand
        where the pattern is not a variable.
        """
        head, args = spine(t)
        if not isinstance(head, Const):
            return None
        for rule in self.by_head.get(head.name, ()):
            k = rule.arity
            if len(args) < k:
                continue
            sigma: dict[str, Term] = {}
            pargs = spine(rule.lhs)[1]
            # the root is already in head form; only arguments get reduced
            if all(_match(p, a, sigma, reduce) for p, a in zip(pargs, args)):
                return apps(substitute_many(rule.rhs, sigma), *args[k:])
        return None


def rewrite_step(rules, t: Term) -> Term | None:
    """One R-step at the leftmost-outermost matching position (syntactic).

    ``rules`` is a ``Signature``, a ``RuleIndex`` or an iterable of rules.
    """
    match rules:
        case RuleIndex():
            index = rules
        case Signature():
            index = rules.index
        case _:
            index = RuleIndex(rules)
    for pos in positions(t):
        new = index.rewrite_head(subterm_at(t, pos))
        if new is not None:
            return replace_at(t, pos, new)
    return None


@dataclass(frozen=True)
class Signature:
    """Global constant declarations plus rewrite rules."""

    decls: Context = EMPTY
    rules: tuple[RewriteRule, ...] = ()
    index: RuleIndex = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", RuleIndex(self.rules))

    def lookup(self, name: str) -> Term | None:
        return self.decls.lookup(name)

    def __contains__(self, name: str) -> bool:
        return name in self.decls

    def names(self):
        return self.decls.names()

    def __str__(self) -> str:
        from lpimod.surface import print_signature

        return print_signature(self)

