"""An independent reference implementation used as a test oracle.

Terms are nested tuples with explicit names; substitution renames binders
to avoid capture, and normalization is naive leftmost-outermost stepping.
Nothing here is shared with the package except the conversion from its
term type.
"""

from itertools import count

from lpimod.syntax import Abs, App, BVar, Const, Prod, Sort, Var

_fresh = count()


def to_named(t, scope=()):
    match t:
        case Sort(s):
            return ("sort", s)
        case Var(x):
            return ("var", x)
        case Const(c):
            return ("const", c)
        case BVar(i):
            return ("var", scope[i])
        case App(f, a):
            return ("app", to_named(f, scope), to_named(a, scope))
        case Abs(h, ty, body) | Prod(h, ty, body):
            name = f"{h}#{next(_fresh)}"
            tag = "lam" if isinstance(t, Abs) else "pi"
            return (tag, name, to_named(ty, scope), to_named(body, (name, *scope)))
    raise TypeError(t)


def fv(t):
    match t:
        case ("var", x):
            return {x}
        case ("app", f, a):
            return fv(f) | fv(a)
        case ("lam" | "pi", x, ty, body):
            return fv(ty) | (fv(body) - {x})
    return set()


def subst(t, x, v):
    match t:
        case ("var", y):
            return v if y == x else t
        case ("app", f, a):
            return ("app", subst(f, x, v), subst(a, x, v))
        case (tag, y, ty, body) if tag in ("lam", "pi"):
            ty = subst(ty, x, v)
            if y == x:
                return (tag, y, ty, body)
            if y in fv(v):
                z = f"{y.split('#')[0]}#{next(_fresh)}"
                body = subst(body, y, ("var", z))
                y = z
            return (tag, y, ty, subst(body, x, v))
    return t


def match(p, t, sigma, pvars):
    if p[0] == "var" and p[1] in pvars:
        if p[1] in sigma:
            return sigma[p[1]] == t
        sigma[p[1]] = t
        return True
    if p[0] != t[0]:
        return False
    if p[0] == "app":
        return match(p[1], t[1], sigma, pvars) and match(p[2], t[2], sigma, pvars)
    return p == t


def instantiate_rule(rhs, sigma):
    for x, v in sigma.items():
        rhs = subst(rhs, x, v)
    return rhs


def step(t, rules=()):
    """One leftmost-outermost step; beta before rules at each position."""
    if t[0] == "app" and t[1][0] == "lam":
        _, (_, x, _, body), a = t
        return subst(body, x, a)
    for lhs, rhs, pvars in rules:
        sigma = {}
        if match(lhs, t, sigma, pvars):
            return instantiate_rule(rhs, sigma)
    match t:
        case ("app", f, a):
            new = step(f, rules)
            if new is not None:
                return ("app", new, a)
            new = step(a, rules)
            return None if new is None else ("app", f, new)
        case (tag, x, ty, body) if tag in ("lam", "pi"):
            new = step(ty, rules)
            if new is not None:
                return (tag, x, new, body)
            new = step(body, rules)
            return None if new is None else (tag, x, ty, new)
    return None


def normal_form(t, rules=(), limit=20_000):
    """Normal form, or None when ``limit`` steps did not suffice."""
    for _ in range(limit):
        new = step(t, rules)
        if new is None:
            return t
        t = new
    return None


def alpha(a, b, left=None, right=None):
    left = left or {}
    right = right or {}
    match a, b:
        case ("var", x), ("var", y):
            return left.get(x, x) == right.get(y, y) and (x in left) == (y in right)
        case ("app", f1, a1), ("app", f2, a2):
            return alpha(f1, f2, left, right) and alpha(a1, a2, left, right)
        case (t1, x, ty1, b1), (t2, y, ty2, b2) if t1 == t2 and t1 in ("lam", "pi"):
            marker = f"@{next(_fresh)}"
            return alpha(ty1, ty2, left, right) and alpha(b1, b2, {**left, x: marker}, {**right, y: marker})
    return a == b


def oracle_rules(signature):
    """The signature's rules as named patterns."""
    out = []
    for rule in signature.rules:
        out.append((to_named(rule.lhs), to_named(rule.rhs), set(rule.delta.names())))
    return out


def convertible(a, b, rules=(), limit=20_000):
    """True/False by normalizing both sides, None if either side ran out."""
    na = normal_form(to_named(a), rules, limit)
    nb = normal_form(to_named(b), rules, limit)
    if na is None or nb is None:
        return None
    return alpha(na, nb)


def same_normal_form(a, b, rules=()):
    return convertible(a, b, rules) is True
