"""The lambda-Pi calculus modulo a signature of rewrite rules.

The typing rules are the PTS rules for the fixed specification below,
with the Variable rule extended to global constants and conversion taken
modulo beta and the signature's rules; ``Kernel`` already does both when
given a signature.
"""

from __future__ import annotations

import enum

from lpimod.checker import Kernel, _run, check_with, infer_with, wf_with
from lpimod.outcome import Conv, Fuel, Ill, IllTyped, Ok, OutOfFuel, Typed, Unknown, as_fuel
from lpimod.reduction import beta_r_step, conv
from lpimod.rewriting import (
    RewriteRule,
    RuleError,
    RuleIndex,
    Signature,
    check_rule_shape,
    match_pattern,
    rewrite_step,
)
from lpimod.specification import Specification
from lpimod.syntax import EMPTY, Context, Sort, Term

LPI_SPEC = Specification.build(
    ["Type", "Kind"],
    [("Type", "Kind")],
    [("Type", "Type", "Type"), ("Type", "Kind", "Kind")],
    name="lambda-Pi",
)


class Level(enum.Enum):
    KIND = "Kind"
    TYPE = "Type"


def lpi_kernel(sig: Signature) -> Kernel:
    return Kernel(LPI_SPEC, sig)


def infer_lpi(sig: Signature, ctx: Context, t: Term, fuel: Fuel | int | None = None):
    return infer_with(lpi_kernel(sig), ctx, t, fuel)


def check_lpi(sig: Signature, ctx: Context, t: Term, against: Term, fuel: Fuel | int | None = None):
    return check_with(lpi_kernel(sig), ctx, t, against, fuel)


def wf_lpi(sig: Signature, ctx: Context, fuel: Fuel | int | None = None):
    return wf_with(lpi_kernel(sig), ctx, fuel)


def convertible_mod(sig: Signature, a: Term, b: Term, fuel: Fuel | int | None = None) -> Conv:
    try:
        return Conv.YES if conv(a, b, as_fuel(fuel), sig.index) else Conv.NO
    except OutOfFuel:
        return Conv.UNKNOWN


def validate_rewrite_rule(sig: Signature, rule: RewriteRule, fuel: Fuel | int | None = None):
    """Type both sides of ``rule`` in ``sig`` extended by the rule context.

    ``sig`` holds the rules accepted so far; conversion is modulo those.
    Returns ``Typed(A)`` with the common type ``A``.
    """
    kernel = lpi_kernel(sig)

    def go(fuel: Fuel):
        try:
            check_rule_shape(rule)
        except RuleError as e:
            raise IllTyped("Rule", str(e), rule.lhs) from None
        for x, _ in rule.delta:
            if x in sig:
                raise IllTyped("Rule", f"rule variable {x} clashes with a constant", rule.lhs)
        kernel.check_context(rule.delta, fuel)
        ty = kernel.infer(rule.delta, rule.lhs, fuel)
        inferred = kernel.infer(rule.delta, rule.rhs, fuel)
        if not kernel.conv(inferred, ty, fuel):
            raise IllTyped(
                "Rule",
                f"the right-hand side has type {inferred} but the left-hand side has type {ty}",
                rule.rhs,
            )
        return Typed(ty)

    return _run(go, fuel)


def validate_signature(sig: Signature, fuel: Fuel | int | None = None):
    """Check declarations in order, then each rule modulo its predecessors."""
    fuel = as_fuel(fuel)
    decls = sig.decls
    for i, (c, a) in enumerate(decls):
        # each constant is typed against the earlier constants only
        kernel = lpi_kernel(Signature(decls[:i]))

        def declare(fuel: Fuel, c=c, a=a, kernel=kernel):
            kernel.check_scope(EMPTY, a)
            kernel.sort_of(EMPTY, a, fuel, "Declaration")
            return Ok(c)

        outcome = _run(declare, fuel)
        if not outcome:
            return outcome
    accepted: list[RewriteRule] = []
    for rule in sig.rules:
        outcome = validate_rewrite_rule(Signature(decls, tuple(accepted)), rule, fuel)
        if not outcome:
            return outcome
        accepted.append(rule)
    return Ok(f"{len(decls)} declarations, {len(accepted)} rules")


def level_of(sig: Signature, ctx: Context, t: Term, fuel: Fuel | int | None = None) -> Level | Ill | Unknown:
    """Kind-level iff the type of ``t`` has type Kind, Type-level iff it has type Type."""
    kernel = lpi_kernel(sig)

    def go(fuel: Fuel):
        return kernel_level(kernel, ctx, t, fuel)

    return _run(go, fuel)


def kernel_level(kernel: Kernel, ctx: Context, t: Term, fuel: Fuel) -> Level:
    ty = kernel.infer(ctx, t, fuel)
    if kernel.whnf(ty, fuel) == Sort("Kind"):
        raise IllTyped("Level", "the term is a kind and has no level", t)
    s = kernel.sort_of(ctx, ty, fuel, "Level")
    return Level.KIND if s == "Kind" else Level.TYPE


__all__ = [
    "LPI_SPEC",
    "Level",
    "RuleIndex",
    "beta_r_step",
    "check_lpi",
    "convertible_mod",
    "infer_lpi",
    "kernel_level",
    "level_of",
    "lpi_kernel",
    "match_pattern",
    "rewrite_step",
    "validate_rewrite_rule",
    "validate_signature",
    "wf_lpi",
]
