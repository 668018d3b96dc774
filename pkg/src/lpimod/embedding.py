"""Embedding a functional PTS into lambda-Pi modulo rewriting.

Each sort ``s`` becomes a universe ``u_s : Type`` of codes with a decoding
``eps_s : u_s -> Type``.  Axioms ``s1 : s2`` give codes ``dot_s1 : u_s2``
and rules ``(s1, s2, s3)`` give product codes ``pi_s1_s2_s3``; the
rewrite rules make decoding a code compute the type it stands for.

Translations raise ``IllTyped`` when the input is not well typed in the
source system and ``OutOfFuel`` when sort inference runs out of budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from lpimod.checker import Kernel
from lpimod.lpi import validate_rewrite_rule
from lpimod.outcome import Fuel, IllTyped, as_fuel
from lpimod.rewriting import RewriteRule, Signature
from lpimod.specification import TAU, Specification, SpecError, validate_spec
from lpimod.syntax import (
    EMPTY,
    Abs,
    App,
    Const,
    Context,
    Prod,
    Sort,
    Term,
    Var,
    abstract,
    apps,
    arrow,
    fresh_name,
    open_binder,
    pi,
)


@dataclass(frozen=True)
class EmbeddedSystem:
    """``source`` together with its generated signature and name tables."""

    source: Specification
    signature: Signature
    u: Mapping[str, str]
    eps: Mapping[str, str]
    dot: Mapping[str, str]
    pi: Mapping[tuple[str, str, str], str]

    def role(self, name: str) -> tuple[str, object] | None:
        """``("u", s)``, ``("eps", s)``, ``("dot", s)`` or ``("pi", (s1, s2, s3))``."""
        for kind in ("u", "eps", "dot", "pi"):
            for key, const in getattr(self, kind).items():
                if const == name:
                    return kind, key
        return None

    def names(self) -> frozenset[str]:
        return frozenset(self.signature.names())


def _sort_key(spec: Specification):
    return sorted(spec.sorts)


def build_embedding(spec: Specification, fuel: Fuel | int | None = None) -> EmbeddedSystem:
    validate_spec(spec)
    if TAU in spec.sorts:
        raise SpecError(f"cannot embed a specification containing {TAU}")
    sorts = _sort_key(spec)
    u = {s: f"u_{s}" for s in sorts}
    eps = {s: f"eps_{s}" for s in sorts}
    dot = {s1: f"dot_{s1}" for s1 in sorted(spec.axioms)}
    pis = {(s1, s2, s3): f"pi_{s1}_{s2}_{s3}" for (s1, s2), s3 in sorted(spec.rules.items())}
    generated = [*u.values(), *eps.values(), *dot.values(), *pis.values()]
    if len(set(generated)) != len(generated):
        dup = sorted({n for n in generated if generated.count(n) > 1})
        raise SpecError(f"generated constant names collide: {', '.join(dup)}")

    decls: list[tuple[str, Term]] = []
    decls += [(u[s], Sort("Type")) for s in sorts]
    decls += [(eps[s], arrow(Const(u[s]), Sort("Type"))) for s in sorts]
    decls += [(dot[s1], Const(u[s2])) for s1, s2 in sorted(spec.axioms.items())]
    for (s1, s2, s3), name in pis.items():
        a = Var("a")
        code = pi("a", Const(u[s1]), arrow(arrow(App(Const(eps[s1]), a), Const(u[s2])), Const(u[s3])))
        decls.append((name, code))

    rules: list[RewriteRule] = []
    for s1, s2 in sorted(spec.axioms.items()):
        rules.append(RewriteRule(EMPTY, App(Const(eps[s2]), Const(dot[s1])), Const(u[s1]), f"{eps[s2]}_{dot[s1]}"))
    for (s1, s2, s3), name in pis.items():
        A, B = Var("A"), Var("B")
        delta = Context([("A", Const(u[s1])), ("B", arrow(App(Const(eps[s1]), A), Const(u[s2])))])
        lhs = App(Const(eps[s3]), apps(Const(name), A, B))
        rhs = pi("x", App(Const(eps[s1]), A), App(Const(eps[s2]), App(B, Var("x"))))
        rules.append(RewriteRule(delta, lhs, rhs, f"{eps[s3]}_{name}"))

    fuel = as_fuel(fuel)
    sig = Signature(Context(decls))
    for rule in rules:
        outcome = validate_rewrite_rule(sig, rule, fuel)
        if not outcome:
            raise SpecError(f"generated rule {rule.name} is ill-typed: {outcome}")
    return EmbeddedSystem(spec, Signature(Context(decls), tuple(rules)), u, eps, dot, pis)


class _Translator:
    def __init__(self, emb: EmbeddedSystem, fuel: Fuel):
        self.emb = emb
        self.kernel = Kernel(emb.source)
        self.fuel = fuel
        self.reserved = emb.names() | emb.source.sorts

    def open(self, ctx: Context, hint: str, ty: Term, body: Term):
        x = fresh_name(hint, self.reserved | set(ctx.names()))
        return ctx.extend(x, ty), x, open_binder(body, x)

    def term(self, ctx: Context, m: Term) -> Term:
        match m:
            case Sort(s):
                if s not in self.emb.dot:
                    raise IllTyped("Sort", f"no axiom ({s} : ·)", m)
                return Const(self.emb.dot[s])
            case Var():
                return m
            case App(f, a):
                return App(self.term(ctx, f), self.term(ctx, a))
            case Abs(h, a, body):
                ext, x, opened = self.open(ctx, h, a, body)
                return Abs(h, self.type(ctx, a), abstract(self.term(ext, opened), x))
            case Prod(h, a, body):
                s1 = self.kernel.sort_of(ctx, a, self.fuel, "Product")
                ext, x, opened = self.open(ctx, h, a, body)
                s2 = self.kernel.sort_of(ext, opened, self.fuel, "Product")
                s3 = self.kernel.product_sort(s1, s2, m)
                code = Abs(h, self.type(ctx, a), abstract(self.term(ext, opened), x))
                return apps(Const(self.emb.pi[s1, s2, s3]), self.term(ctx, a), code)
        raise IllTyped("Variable", f"cannot translate {m!r}", m)

    def type(self, ctx: Context, a: Term) -> Term:
        match a:
            case Sort(s) if s in self.emb.u:
                return Const(self.emb.u[s])
            case Prod(h, b, body):
                ext, x, opened = self.open(ctx, h, b, body)
                return Prod(h, self.type(ctx, b), abstract(self.type(ext, opened), x))
        s = self.kernel.sort_of(ctx, a, self.fuel)
        return App(Const(self.emb.eps[s]), self.term(ctx, a))

    def context(self, ctx: Context) -> Context:
        out = []
        for i, (x, a) in enumerate(ctx):
            out.append((x, self.type(ctx[:i], a)))
        return Context(out)


def _check_source_context(emb: EmbeddedSystem, tr: _Translator, ctx: Context) -> None:
    for x, _ in ctx:
        if x in tr.reserved:
            raise IllTyped("Declaration", f"{x} clashes with a constant of the embedding")
    tr.kernel.check_context(ctx, tr.fuel)


def translate_term(emb: EmbeddedSystem, ctx: Context, m: Term, fuel: Fuel | int | None = None) -> Term:
    """``|m|_ctx``; ``m`` must be a ``ctx``-term of the source system."""
    tr = _Translator(emb, as_fuel(fuel))
    _check_source_context(emb, tr, ctx)
    tr.kernel.check_scope(ctx, m)
    tr.kernel.infer(ctx, m, tr.fuel)
    return tr.term(ctx, m)


def translate_type(emb: EmbeddedSystem, ctx: Context, a: Term, fuel: Fuel | int | None = None) -> Term:
    """``||a||_ctx``; ``a`` must be a sort or typed by a sort."""
    tr = _Translator(emb, as_fuel(fuel))
    _check_source_context(emb, tr, ctx)
    tr.kernel.check_scope(ctx, a)
    tr.kernel.is_ctx_type(ctx, a, tr.fuel)
    return tr.type(ctx, a)


def translate_context(emb: EmbeddedSystem, ctx: Context, fuel: Fuel | int | None = None) -> Context:
    tr = _Translator(emb, as_fuel(fuel))
    _check_source_context(emb, tr, ctx)
    return tr.context(ctx)


def translate_judgment(emb: EmbeddedSystem, ctx: Context, m: Term, a: Term, fuel: Fuel | int | None = None):
    """``(||ctx||, |m|_ctx, ||a||_ctx)`` sharing one fuel budget."""
    fuel = as_fuel(fuel)
    return (
        translate_context(emb, ctx, fuel),
        translate_term(emb, ctx, m, fuel),
        translate_type(emb, ctx, a, fuel),
    )
