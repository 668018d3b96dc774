"""beta / beta-R reduction, weak-head normalization and fueled conversion.

Every function takes an optional ``RuleIndex``; without one the relation
is plain beta, with one it is beta-R where rewrite rules are tried at
the head once beta has exposed a constant.
"""

from __future__ import annotations

from lpimod.outcome import Conv, Fuel, OutOfFuel, Unknown, as_fuel
from lpimod.rewriting import RuleIndex
from lpimod.syntax import (
    Abs,
    App,
    BVar,
    Const,
    Prod,
    Sort,
    Term,
    Var,
    apps,
    instantiate,
    positions,
    replace_at,
    spine,
    subterm_at,
)


def is_beta_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs)


def contract(t: Term) -> Term:
    """Contract the beta-redex at the root of ``t``."""
    return instantiate(t.fun.body, t.arg)


def beta_step(t: Term) -> Term | None:
    """Leftmost-outermost single beta step, or None for a beta-normal term."""
    match t:
        case App(Abs(), _):
            return contract(t)
        case App(f, a):
            new = beta_step(f)
            if new is not None:
                return App(new, a)
            new = beta_step(a)
            return None if new is None else App(f, new)
        case Abs(h, ty, body):
            new = beta_step(ty)
            if new is not None:
                return Abs(h, new, body)
            new = beta_step(body)
            return None if new is None else Abs(h, ty, new)
        case Prod(h, ty, body):
            new = beta_step(ty)
            if new is not None:
                return Prod(h, new, body)
            new = beta_step(body)
            return None if new is None else Prod(h, ty, new)
    return None


def beta_r_step(rules: RuleIndex | None, t: Term) -> Term | None:
    """Leftmost-outermost beta-R step; at a position beta is tried first."""
    for pos in positions(t):
        sub = subterm_at(t, pos)
        if is_beta_redex(sub):
            return replace_at(t, pos, contract(sub))
        if rules:
            new = rules.rewrite_head(sub)
            if new is not None:
                return replace_at(t, pos, new)
    return None


def redex_positions(t: Term, rules: RuleIndex | None = None) -> list[tuple[int, ...]]:
    """Every position holding a beta (or R) redex, leftmost-outermost first."""
    out = []
    for pos in positions(t):
        sub = subterm_at(t, pos)
        if is_beta_redex(sub) or (rules and rules.rewrite_head(sub) is not None):
            out.append(pos)
    return out


def step_at(t: Term, pos: tuple[int, ...], rules: RuleIndex | None = None) -> Term:
    sub = subterm_at(t, pos)
    if is_beta_redex(sub):
        return replace_at(t, pos, contract(sub))
    new = rules.rewrite_head(sub) if rules else None
    if new is None:
        raise ValueError(f"no redex at position {pos}")
    return replace_at(t, pos, new)


def whnf(t: Term, fuel: Fuel, rules: RuleIndex | None = None) -> Term:
    """Weak-head normal form; raises ``OutOfFuel``."""
    while True:
        head, args = spine(t)
        if isinstance(head, Abs) and args:
            fuel.spend()
            t = apps(instantiate(head.body, args[0]), *args[1:])
            continue
        if rules and isinstance(head, Const):
            new = rules.rewrite_head(t, lambda u: whnf(u, fuel, rules))
            if new is not None:
                fuel.spend()
                t = new
                continue
        return t


def nf(t: Term, fuel: Fuel, rules: RuleIndex | None = None) -> Term:
    """Normal form by normal-order reduction; raises ``OutOfFuel``."""
    t = whnf(t, fuel, rules)
    match t:
        case Abs(h, ty, body):
            return Abs(h, nf(ty, fuel, rules), nf(body, fuel, rules))
        case Prod(h, ty, body):
            return Prod(h, nf(ty, fuel, rules), nf(body, fuel, rules))
        case App():
            head, args = spine(t)
            # the head is a variable or constant, or a product in ill-typed input
            return apps(nf(head, fuel, rules), *(nf(a, fuel, rules) for a in args))
    return t


def normalize(t: Term, fuel: Fuel | int | None = None, rules: RuleIndex | None = None) -> Term | Unknown:
    try:
        return nf(t, as_fuel(fuel), rules)
    except OutOfFuel as e:
        return Unknown(str(e))


def conv(a: Term, b: Term, fuel: Fuel, rules: RuleIndex | None = None) -> bool:
    """Decide convertibility by weak-head normalization and descent.

    Raises ``OutOfFuel``; a False answer is only given once both sides
    are in weak-head normal form with incompatible heads.
    """
    if a == b:
        return True
    a = whnf(a, fuel, rules)
    b = whnf(b, fuel, rules)
    if a == b:
        return True
    match a, b:
        case Sort(x), Sort(y):
            return x == y
        case (Prod(_, ta, ba), Prod(_, tb, bb)) | (Abs(_, ta, ba), Abs(_, tb, bb)):
            return conv(ta, tb, fuel, rules) and conv(ba, bb, fuel, rules)
    ha, aa = spine(a)
    hb, ab = spine(b)
    if len(aa) != len(ab) or not aa:
        return False
    atoms = (Var, Const, BVar)
    if isinstance(ha, atoms) or isinstance(hb, atoms):
        if ha != hb:
            return False
    elif not conv(ha, hb, fuel, rules):
        # an applied sort or product only arises in ill-typed input
        return False
    return all(conv(x, y, fuel, rules) for x, y in zip(aa, ab))


def convertible(a: Term, b: Term, fuel: Fuel | int | None = None, rules: RuleIndex | None = None) -> Conv:
    try:
        return Conv.YES if conv(a, b, as_fuel(fuel), rules) else Conv.NO
    except OutOfFuel:
        return Conv.UNKNOWN
