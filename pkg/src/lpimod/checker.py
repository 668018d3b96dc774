"""Type inference for pure type systems, optionally over a signature.

``Kernel`` implements the Empty / Declaration / Variable / Sort / Product /
Abstraction / Application / Conversion rules for any functional
specification.  With a ``Signature`` the Variable rule also consults the
global constants and conversion is taken modulo the signature's rewrite
rules; that is all the lambda-Pi-modulo kernel needs on top.

Kernel methods raise ``IllTyped`` / ``OutOfFuel``; the module-level
functions wrap them into ``Typed`` / ``Ill`` / ``Unknown`` outcomes.
"""

from __future__ import annotations

from lpimod.outcome import (
    Fuel,
    Ill,
    IllTyped,
    Ok,
    OutOfFuel,
    Typed,
    Unknown,
    as_fuel,
    ill_of,
)
from lpimod.reduction import conv, nf, whnf
from lpimod.rewriting import Signature
from lpimod.specification import Specification
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
    abstract,
    fresh_name,
    free_vars,
    instantiate,
    open_binder,
)


class Kernel:
    def __init__(self, spec: Specification, signature: Signature | None = None):
        self.spec = spec
        self.signature = signature
        self.rules = signature.index if signature is not None and signature.rules else None

    # -- reduction ---------------------------------------------------------

    def whnf(self, t: Term, fuel: Fuel) -> Term:
        return whnf(t, fuel, self.rules)

    def conv(self, a: Term, b: Term, fuel: Fuel) -> bool:
        return conv(a, b, fuel, self.rules)

    def fresh(self, hint: str, ctx: Context) -> str:
        taken = set(ctx.names())
        if self.signature is not None:
            taken |= set(self.signature.names())
        taken |= self.spec.sorts
        return fresh_name(hint, taken)

    def open(self, ctx: Context, hint: str, ty: Term, body: Term) -> tuple[Context, str, Term]:
        x = self.fresh(hint, ctx)
        return ctx.extend(x, ty), x, open_binder(body, x)

    # -- typing ------------------------------------------------------------

    def infer(self, ctx: Context, t: Term, fuel: Fuel) -> Term:
        """Infer a type of ``t``; ``ctx`` is assumed well-formed."""
        match t:
            case Sort(s):
                if s not in self.spec.sorts:
                    raise IllTyped("Sort", f"{s} is not a sort of this specification", t)
                s2 = self.spec.axiom(s)
                if s2 is None:
                    raise IllTyped("Sort", f"no axiom ({s} : ·)", t)
                return Sort(s2)
            case Var(x):
                ty = ctx.lookup(x)
                if ty is None:
                    raise IllTyped("Variable", f"unbound variable {x}", t)
                return ty
            case Const(c):
                ty = self.signature.lookup(c) if self.signature is not None else None
                if ty is None:
                    raise IllTyped("Variable", f"undeclared constant {c}", t)
                return ty
            case BVar(i):
                raise IllTyped("Variable", f"dangling bound variable #{i}", t)
            case App(f, a):
                tf = self.whnf(self.infer(ctx, f, fuel), fuel)
                if not isinstance(tf, Prod):
                    raise IllTyped("Application", f"the head has type {tf}, which is not a product", t)
                ta = self.infer(ctx, a, fuel)
                if not self.conv(ta, tf.ty, fuel):
                    raise IllTyped("Application", f"the argument has type {ta} but {tf.ty} was expected", t)
                return instantiate(tf.body, a)
            case Abs(h, a, body):
                s1 = self.sort_of(ctx, a, fuel, "Abstraction")
                ext, x, opened = self.open(ctx, h, a, body)
                b = self.infer(ext, opened, fuel)
                s2 = self.sort_of(ext, b, fuel, "Abstraction")
                self.product_sort(s1, s2, t)
                return Prod(h, a, abstract(b, x))
            case Prod(h, a, body):
                s1 = self.sort_of(ctx, a, fuel, "Product")
                ext, _, opened = self.open(ctx, h, a, body)
                s2 = self.sort_of(ext, opened, fuel, "Product")
                return Sort(self.product_sort(s1, s2, t))
        raise IllTyped("Syntax", f"not a term: {t!r}", None)

    def product_sort(self, s1: str, s2: str, where: Term) -> str:
        s3 = self.spec.rule(s1, s2)
        if s3 is None:
            raise IllTyped("Product", f"no rule ({s1}, {s2}, ·)", where)
        return s3

    def sort_of(self, ctx: Context, a: Term, fuel: Fuel, rule: str = "Conversion") -> str:
        """The sort ``s`` with ``ctx |- a : s``."""
        ty = self.whnf(self.infer(ctx, a, fuel), fuel)
        if not isinstance(ty, Sort):
            raise IllTyped(rule, f"expected a type, but its type {ty} is not a sort", a)
        return ty.name

    def check(self, ctx: Context, t: Term, ty: Term, fuel: Fuel) -> None:
        inferred = self.infer(ctx, t, fuel)
        if not self.conv(inferred, ty, fuel):
            raise IllTyped("Conversion", f"type mismatch: expected {ty}, got {inferred}", t)

    def is_ctx_type(self, ctx: Context, a: Term, fuel: Fuel) -> str | None:
        """Sort of ``a``, or None when ``a`` is itself a sort without axiom."""
        if isinstance(a, Sort) and a.name in self.spec.sorts and self.spec.axiom(a.name) is None:
            return None
        return self.sort_of(ctx, a, fuel)

    def check_scope(self, ctx: Context, t: Term) -> None:
        unbound = free_vars(t) - set(ctx.names())
        if unbound:
            name = sorted(unbound)[0]
            raise IllTyped("Variable", f"unbound variable {name}", Var(name))

    def check_context(self, ctx: Context, fuel: Fuel) -> None:
        """Empty / Declaration rules, declaration by declaration."""
        prefix = EMPTY
        for x, a in ctx:
            if x in prefix or (self.signature is not None and x in self.signature):
                raise IllTyped("Declaration", f"{x} is already declared")
            self.check_scope(prefix, a)
            self.sort_of(prefix, a, fuel, "Declaration")
            prefix = prefix.extend(x, a)


def _run(fn, fuel):
    try:
        return fn(as_fuel(fuel))
    except IllTyped as e:
        return ill_of(e)
    except OutOfFuel as e:
        return Unknown(str(e))


def _tidy(kernel: Kernel, ty: Term, fuel: Fuel) -> Term:
    # beta only: rewriting would unfold types the user wrote on purpose
    try:
        return nf(ty, fuel)
    except OutOfFuel:
        return ty


def infer_with(kernel: Kernel, ctx: Context, t: Term, fuel: Fuel | int | None = None):
    def go(fuel: Fuel):
        kernel.check_context(ctx, fuel)
        kernel.check_scope(ctx, t)
        ty = kernel.infer(ctx, t, fuel)
        return Typed(_tidy(kernel, ty, fuel))

    return _run(go, fuel)


def check_with(kernel: Kernel, ctx: Context, t: Term, against: Term, fuel: Fuel | int | None = None):
    def go(fuel: Fuel):
        kernel.check_context(ctx, fuel)
        kernel.check_scope(ctx, against)
        kernel.is_ctx_type(ctx, against, fuel)
        kernel.check_scope(ctx, t)
        kernel.check(ctx, t, against, fuel)
        return Typed(against)

    return _run(go, fuel)


def wf_with(kernel: Kernel, ctx: Context, fuel: Fuel | int | None = None):
    def go(fuel: Fuel):
        kernel.check_context(ctx, fuel)
        return Ok(f"{len(ctx)} declarations")

    return _run(go, fuel)


# -- public PTS API ---------------------------------------------------------


def infer(spec: Specification, ctx: Context, t: Term, fuel: Fuel | int | None = None) -> Typed | Ill | Unknown:
    return infer_with(Kernel(spec), ctx, t, fuel)


def check(
    spec: Specification, ctx: Context, t: Term, against: Term, fuel: Fuel | int | None = None
) -> Typed | Ill | Unknown:
    return check_with(Kernel(spec), ctx, t, against, fuel)


def wf_context(spec: Specification, ctx: Context, fuel: Fuel | int | None = None) -> Ok | Ill | Unknown:
    return wf_with(Kernel(spec), ctx, fuel)


def classify_type(spec: Specification, ctx: Context, a: Term, fuel: Fuel | int | None = None) -> str | None:
    """Sort ``s`` with ``ctx |- a : s``, or None if ``a`` is a top-sort.

    Raises ``IllTyped`` if ``a`` is not a ``ctx``-type and ``OutOfFuel``
    when conversion runs out of budget.
    """
    kernel = Kernel(spec)
    fuel = as_fuel(fuel)
    kernel.check_context(ctx, fuel)
    kernel.check_scope(ctx, a)
    return kernel.is_ctx_type(ctx, a, fuel)


__all__ = ["Kernel", "infer", "check", "wf_context", "classify_type", "Ill", "Typed", "Unknown"]
