"""Extracting source-system witnesses from lambda-Pi modulo proofs.

The pipeline follows the conservativity argument: remove Kind-level
beta-redexes, translate back into the minimal completion S* of the source
specification, then contract the redexes that only S* can type.  Every
stage is re-checked by a kernel rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from lpimod.checker import Kernel, check_with
from lpimod.embedding import EmbeddedSystem, translate_context, translate_type
from lpimod.lpi import Level, check_lpi, kernel_level, lpi_kernel
from lpimod.outcome import Fuel, Ill, IllTyped, OutOfFuel, Typed, Unknown, as_fuel
from lpimod.reduction import contract, is_beta_redex, whnf
from lpimod.specification import TAU, Specification, SpecError, validate_spec
from lpimod.syntax import (
    Abs,
    App,
    BVar,
    Const,
    Context,
    Prod,
    Sort,
    Term,
    Var,
    arrow,
    lam,
    pi,
    open_binder,
    replace_at,
    subterm_at,
)


def walk(kernel: Kernel, ctx: Context, t: Term, path: tuple[int, ...] = ()) -> Iterator[tuple]:
    """Pre-order ``(path, ctx, subterm)`` with binders opened into ``ctx``.

    Pre-order is leftmost-outermost, so the first hit of a search is the
    redex a leftmost-outermost strategy would contract.
    """
    yield path, ctx, t
    match t:
        case App(f, a):
            yield from walk(kernel, ctx, f, path + (0,))
            yield from walk(kernel, ctx, a, path + (1,))
        case Abs(h, ty, body) | Prod(h, ty, body):
            yield from walk(kernel, ctx, ty, path + (0,))
            x = kernel.fresh(h, ctx)
            yield from walk(kernel, ctx.extend(x, ty), open_binder(body, x), path + (1,))


# -- lambda-Pi minus ---------------------------------------------------------


@dataclass(frozen=True)
class MinusReport:
    ok: bool
    path: tuple[int, ...] | None = None
    redex: Term | None = None

    def __bool__(self) -> bool:
        return self.ok


def kind_redexes(kernel: Kernel, ctx: Context, t: Term, fuel: Fuel) -> list[tuple[tuple[int, ...], Term]]:
    return [
        (path, sub)
        for path, local, sub in walk(kernel, ctx, t)
        if is_beta_redex(sub) and kernel_level(kernel, local, sub, fuel) is Level.KIND
    ]


def is_lpi_minus(emb: EmbeddedSystem, ctx: Context, t: Term, fuel: Fuel | int | None = None) -> MinusReport:
    """Whether ``t`` has no Kind-level beta-redex; raises ``IllTyped``/``OutOfFuel``."""
    kernel = lpi_kernel(emb.signature)
    fuel = as_fuel(fuel)
    kernel.check_scope(ctx, t)
    kernel.infer(ctx, t, fuel)
    found = kind_redexes(kernel, ctx, t, fuel)
    if found:
        path, redex = found[0]
        return MinusReport(False, path, redex)
    return MinusReport(True)


def eliminate_kind_redexes(
    emb: EmbeddedSystem,
    ctx: Context,
    t: Term,
    fuel: Fuel | int | None = None,
    trace: list | None = None,
) -> Term:
    """Contract Kind-level redexes, leftmost-outermost, until none is left.

    When ``trace`` is a list it receives ``(term, kind_redex_count)`` for
    every intermediate term, ending with the result and 0.
    """
    kernel = lpi_kernel(emb.signature)
    fuel = as_fuel(fuel)
    kernel.check_scope(ctx, t)
    kernel.infer(ctx, t, fuel)
    while True:
        found = kind_redexes(kernel, ctx, t, fuel)
        if trace is not None:
            trace.append((t, len(found)))
        if not found:
            return t
        path, _ = found[0]
        fuel.spend()
        # the walk hands out opened subterms; contract the closed original
        t = replace_at(t, path, contract(subterm_at(t, path)))


# -- minimal completion ------------------------------------------------------


@dataclass(frozen=True)
class CompletedSpec:
    base: Specification
    completed: Specification
    tau: str = TAU


def minimal_completion(spec: Specification) -> CompletedSpec:
    validate_spec(spec)
    if TAU in spec.sorts:
        raise SpecError(f"{TAU} is reserved and already occurs in the specification")
    sorts = spec.sorts | {TAU}
    axioms = dict(spec.axioms)
    for s in spec.top_sorts():
        axioms[s] = TAU
    rules = dict(spec.rules)
    for s1, s2 in product(sorts, sorts):
        rules.setdefault((s1, s2), TAU)
    name = f"{spec.name}*" if spec.name else ""
    return CompletedSpec(spec, Specification(frozenset(sorts), axioms, rules, name))


# -- inverse translations ----------------------------------------------------


class OutsideImage(ValueError):
    """The term is not in the image the inverse translations are defined on."""

    def __init__(self, msg: str, term: Term):
        super().__init__(f"outside image: {msg}")
        self.term = term


def _pi_code(s1: str, s2: str) -> Term:
    a, b, x = Var("a"), Var("b"), Var("x")
    return lam("a", Sort(s1), lam("b", arrow(a, Sort(s2)), pi("x", a, App(b, x))))


def inverse_term(emb: EmbeddedSystem, t: Term) -> Term:
    """phi: lambda-Pi minus terms back to the completed source system."""
    match t:
        case Const(c):
            match emb.role(c):
                case ("dot", s):
                    return Sort(s)
                case ("pi", (s1, s2, _)):
                    return _pi_code(s1, s2)
            raise OutsideImage(f"constant {c} in term position", t)
        case Var() | BVar():
            return t
        case App(f, a):
            return App(inverse_term(emb, f), inverse_term(emb, a))
        case Abs(h, ty, body):
            return Abs(h, inverse_type(emb, ty), inverse_term(emb, body))
    raise OutsideImage(f"{t} is not a term of the image", t)


def inverse_type(emb: EmbeddedSystem, a: Term) -> Term:
    """psi: lambda-Pi minus types back to the completed source system."""
    match a:
        case Const(c) if (role := emb.role(c)) and role[0] == "u":
            return Sort(role[1])
        case App(Const(c), m) if (role := emb.role(c)) and role[0] == "eps":
            return inverse_term(emb, m)
        case Prod(h, ty, body):
            return Prod(h, inverse_type(emb, ty), inverse_type(emb, body))
    raise OutsideImage(f"{a} is not a type of the image", a)


def inverse_context(emb: EmbeddedSystem, ctx: Context, fuel: Fuel | int | None = None) -> Context:
    """psi on an object context: every declared type must have type Type."""
    kernel = lpi_kernel(emb.signature)
    fuel = as_fuel(fuel)
    kernel.check_context(ctx, fuel)
    out = []
    for i, (x, a) in enumerate(ctx):
        if kernel.sort_of(ctx[:i], a, fuel, "Declaration") != "Type":
            raise IllTyped("Object context", f"not an object context: {x} : {a} is not typed by Type", a)
        out.append((x, inverse_type(emb, a)))
    return Context(out)


# -- H_tau and tau-redexes ---------------------------------------------------


def height_tau(cspec: CompletedSpec, ctx: Context, a: Term, fuel: Fuel | int | None = None) -> int:
    kernel = Kernel(cspec.completed)
    fuel = as_fuel(fuel)
    kernel.check_scope(ctx, a)
    return _height(kernel, ctx, a, fuel, cspec.tau)


def _height(kernel: Kernel, ctx: Context, a: Term, fuel: Fuel, tau: str) -> int:
    if kernel.is_ctx_type(ctx, a, fuel) != tau:
        return 0
    # tau-typed types reduce to a sort or a product
    a = whnf(a, fuel)
    match a:
        case Sort():
            return 0
        case Prod(h, b, body):
            x = kernel.fresh(h, ctx)
            ext = ctx.extend(x, b)
            return 1 + max(_height(kernel, ctx, b, fuel, tau), _height(kernel, ext, open_binder(body, x), fuel, tau))
    raise IllTyped("Height", f"a type of sort {tau} should reduce to a sort or a product, got {a}", a)


def tau_redexes(kernel: Kernel, ctx: Context, t: Term, fuel: Fuel, tau: str = TAU):
    """Redexes whose abstraction has a product type of sort tau."""
    for path, local, sub in walk(kernel, ctx, t):
        if is_beta_redex(sub):
            product_type = kernel.infer(local, sub.fun, fuel)
            if kernel.sort_of(local, product_type, fuel) == tau:
                yield path, sub


def reduce_tau_redexes(
    cspec: CompletedSpec,
    ctx: Context,
    m: Term,
    fuel: Fuel | int | None = None,
    trace: list | None = None,
) -> Term:
    """Contract tau-level redexes leftmost-outermost; raises ``OutOfFuel``."""
    kernel = Kernel(cspec.completed)
    fuel = as_fuel(fuel)
    kernel.check_scope(ctx, m)
    kernel.infer(ctx, m, fuel)
    if trace is not None:
        trace.append(m)
    while True:
        hit = next(tau_redexes(kernel, ctx, m, fuel, cspec.tau), None)
        if hit is None:
            return m
        path, _ = hit
        fuel.spend()
        m = replace_at(m, path, contract(subterm_at(m, path)))
        if trace is not None:
            trace.append(m)


# -- end to end --------------------------------------------------------------


class ExtractionError(Exception):
    def __init__(self, stage: str, outcome):
        super().__init__(f"{stage}: {outcome}")
        self.stage = stage
        self.outcome = outcome


@dataclass(frozen=True)
class ExtractionTrace:
    input: Term
    kind_steps: tuple[tuple[Term, int], ...]
    eliminated: Term
    inverted: Term
    tau_steps: tuple[Term, ...]
    witness: Term
    outcome: Typed | Ill | Unknown
    checks: tuple[tuple[str, object], ...] = field(default=())


def extract_witness(
    emb: EmbeddedSystem,
    cspec: CompletedSpec,
    src_ctx: Context,
    src_type: Term,
    n: Term,
    fuel: Fuel | int | None = None,
) -> ExtractionTrace:
    """Turn ``||src_ctx|| |- n : ||src_type||`` into a source-system witness.

    Raises ``ExtractionError`` naming the failing stage; an ``Unknown``
    outcome there means the fuel ran out.
    """
    fuel = as_fuel(fuel)
    checks = []

    def stage(name: str, fn):
        try:
            result = fn()
        except IllTyped as e:
            raise ExtractionError(name, Ill(e.rule, e.explanation, e.location)) from None
        except OutOfFuel as e:
            raise ExtractionError(name, Unknown(str(e))) from None
        except (OutsideImage, SpecError) as e:
            raise ExtractionError(name, Ill("Inverse translation", str(e), getattr(e, "term", None))) from None
        if isinstance(result, (Ill, Unknown)):
            raise ExtractionError(name, result)
        return result

    def recheck(name: str, outcome):
        checks.append((name, outcome))
        if not isinstance(outcome, Typed):
            raise ExtractionError(name, outcome)

    sig = emb.signature
    lpi_ctx = stage("translate", lambda: translate_context(emb, src_ctx, fuel))
    lpi_type = stage("translate", lambda: translate_type(emb, src_ctx, src_type, fuel))
    recheck("input", check_lpi(sig, lpi_ctx, n, lpi_type, fuel))

    kind_steps: list = []
    n_minus = stage("kind-redexes", lambda: eliminate_kind_redexes(emb, lpi_ctx, n, fuel, kind_steps))
    recheck("kind-redexes", check_lpi(sig, lpi_ctx, n_minus, lpi_type, fuel))

    inverted = stage("inverse", lambda: inverse_term(emb, n_minus))
    inv_ctx = stage("inverse", lambda: inverse_context(emb, lpi_ctx, fuel))
    recheck("inverse", check_with(Kernel(cspec.completed), inv_ctx, inverted, src_type, fuel))

    tau_steps: list = []
    witness = stage("tau-redexes", lambda: reduce_tau_redexes(cspec, src_ctx, inverted, fuel, tau_steps))
    outcome = check_with(Kernel(emb.source), src_ctx, witness, src_type, fuel)
    recheck("witness", outcome)
    return ExtractionTrace(
        n, tuple(kind_steps), n_minus, inverted, tuple(tau_steps), witness, outcome, tuple(checks)
    )

