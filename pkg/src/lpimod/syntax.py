"""Core term syntax shared by every system in the package.

Bound variables are de Bruijn indices (``BVar``); binders keep a printable
name hint that never takes part in equality, so ``==`` on terms is
alpha-equivalence.  Free variables are named (``Var``) and global
signature symbols are ``Const``; the two are never confused.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


@dataclass(frozen=True)
class Term:
    def __str__(self) -> str:
        from lpimod.surface import print_term

        return print_term(self)


def _init_lb(obj: Term, value: int) -> None:
    object.__setattr__(obj, "lb", value)


@dataclass(frozen=True)
class Sort(Term):
    name: str
    lb: int = field(init=False, default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Term):
    """Free (context) variable."""

    name: str
    lb: int = field(init=False, default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Const(Term):
    """Global signature constant."""

    name: str
    lb: int = field(init=False, default=0, compare=False, repr=False)


@dataclass(frozen=True)
class BVar(Term):
    index: int
    lb: int = field(init=False, default=0, compare=False, repr=False)

    def __post_init__(self):
        _init_lb(self, self.index + 1)


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term
    lb: int = field(init=False, default=0, compare=False, repr=False)

    def __post_init__(self):
        _init_lb(self, max(self.fun.lb, self.arg.lb))


@dataclass(frozen=True)
class Abs(Term):
    hint: str = field(compare=False)
    ty: Term
    body: Term
    lb: int = field(init=False, default=0, compare=False, repr=False)

    def __post_init__(self):
        _init_lb(self, max(self.ty.lb, self.body.lb - 1))


@dataclass(frozen=True)
class Prod(Term):
    hint: str = field(compare=False)
    ty: Term
    body: Term
    lb: int = field(init=False, default=0, compare=False, repr=False)

    def __post_init__(self):
        _init_lb(self, max(self.ty.lb, self.body.lb - 1))


Binder = (Abs, Prod)


# ---------------------------------------------------------------------------
# de Bruijn plumbing


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every bound index >= ``cutoff``."""
    if d == 0 or t.lb <= cutoff:
        return t
    match t:
        case BVar(i):
            return BVar(i + d) if i >= cutoff else t
        case App(f, a):
            return App(shift(f, d, cutoff), shift(a, d, cutoff))
        case Abs(h, ty, body):
            return Abs(h, shift(ty, d, cutoff), shift(body, d, cutoff + 1))
        case Prod(h, ty, body):
            return Prod(h, shift(ty, d, cutoff), shift(body, d, cutoff + 1))
    return t


def _inst(t: Term, value: Term, depth: int) -> Term:
    if t.lb <= depth:
        return t
    match t:
        case BVar(i):
            if i == depth:
                return shift(value, depth)
            return BVar(i - 1) if i > depth else t
        case App(f, a):
            return App(_inst(f, value, depth), _inst(a, value, depth))
        case Abs(h, ty, body):
            return Abs(h, _inst(ty, value, depth), _inst(body, value, depth + 1))
        case Prod(h, ty, body):
            return Prod(h, _inst(ty, value, depth), _inst(body, value, depth + 1))
    return t


def instantiate(body: Term, value: Term) -> Term:
    """Replace bound index 0 of a binder body with ``value``."""
    return _inst(body, value, 0)


def open_binder(body: Term, name: str) -> Term:
    return instantiate(body, Var(name))


def _abstract(t: Term, name: str, depth: int) -> Term:
    match t:
        case Var(n) if n == name:
            return BVar(depth)
        case App(f, a):
            return App(_abstract(f, name, depth), _abstract(a, name, depth))
        case Abs(h, ty, body):
            return Abs(h, _abstract(ty, name, depth), _abstract(body, name, depth + 1))
        case Prod(h, ty, body):
            return Prod(h, _abstract(ty, name, depth), _abstract(body, name, depth + 1))
    return t


def abstract(t: Term, name: str) -> Term:
    """Turn free ``name`` into bound index 0 (inverse of ``open_binder``)."""
    return _abstract(shift(t, 1), name, 0)


def lam(name: str, ty: Term, body: Term) -> Term:
    """Build ``\\name:ty. body`` where ``body`` mentions ``name`` as a free var."""
    return Abs(name, ty, abstract(body, name))


def pi(name: str, ty: Term, body: Term) -> Term:
    return Prod(name, ty, abstract(body, name))


def arrow(a: Term, b: Term) -> Term:
    return Prod("_", a, shift(b, 1))


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def occurs_bound(t: Term, index: int = 0) -> bool:
    """True if bound ``index`` (relative to ``t``) occurs in ``t``."""
    if t.lb <= index:
        return False
    match t:
        case BVar(i):
            return i == index
        case App(f, a):
            return occurs_bound(f, index) or occurs_bound(a, index)
        case Abs(_, ty, body) | Prod(_, ty, body):
            return occurs_bound(ty, index) or occurs_bound(body, index + 1)
    return False


# ---------------------------------------------------------------------------
# Named operations


def free_vars(t: Term) -> frozenset[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        match stack.pop():
            case Var(n):
                out.add(n)
            case App(f, a):
                stack += (f, a)
            case Abs(_, ty, body) | Prod(_, ty, body):
                stack += (ty, body)
    return frozenset(out)


def constants(t: Term) -> frozenset[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        match stack.pop():
            case Const(n):
                out.add(n)
            case App(f, a):
                stack += (f, a)
            case Abs(_, ty, body) | Prod(_, ty, body):
                stack += (ty, body)
    return frozenset(out)


def substitute_many(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of free variables."""
    if not mapping:
        return t

    def go(t: Term, depth: int) -> Term:
        match t:
            case Var(n) if n in mapping:
                return shift(mapping[n], depth)
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Abs(h, ty, body):
                return Abs(h, go(ty, depth), go(body, depth + 1))
            case Prod(h, ty, body):
                return Prod(h, go(ty, depth), go(body, depth + 1))
        return t

    return go(t, 0)


def substitute(body: Term, var: str, value: Term) -> Term:
    """``body[var \\ value]``; capture is impossible by construction."""
    return substitute_many(body, {var: value})


def alpha_eq(a: Term, b: Term) -> bool:
    return a == b


def size(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + size(f) + size(a)
        case Abs(_, ty, body) | Prod(_, ty, body):
            return 1 + size(ty) + size(body)
    return 1


def fresh_name(hint: str, taken) -> str:
    base = hint if hint and hint != "_" else "x"
    base = base.rstrip("0123456789") or "x"
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------------------
# Positions (paths of child indices) for contextual rewriting


def children(t: Term) -> tuple[Term, ...]:
    match t:
        case App(f, a):
            return (f, a)
        case Abs(_, ty, body) | Prod(_, ty, body):
            return (ty, body)
    return ()


def subterm_at(t: Term, path: Iterable[int]) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    """Replace the subterm at ``path``; ``new`` lives at the same binder depth."""
    if not path:
        return new
    i, rest = path[0], path[1:]
    match t:
        case App(f, a):
            return App(replace_at(f, rest, new), a) if i == 0 else App(f, replace_at(a, rest, new))
        case Abs(h, ty, body):
            return Abs(h, replace_at(ty, rest, new), body) if i == 0 else Abs(h, ty, replace_at(body, rest, new))
        case Prod(h, ty, body):
            return Prod(h, replace_at(ty, rest, new), body) if i == 0 else Prod(h, ty, replace_at(body, rest, new))
    raise IndexError(f"no child {i} in {t!r}")


def positions(t: Term, prefix: tuple[int, ...] = ()) -> Iterator[tuple[int, ...]]:
    """All positions in pre-order, i.e. leftmost-outermost first."""
    yield prefix
    for i, c in enumerate(children(t)):
        yield from positions(c, prefix + (i,))


# ---------------------------------------------------------------------------
# Contexts


class Context:
    """Ordered typed declarations with unique names."""

    __slots__ = ("decls", "_index")

    def __init__(self, decls: Iterable[tuple[str, Term]] = ()):
        self.decls: tuple[tuple[str, Term], ...] = tuple(decls)
        self._index = {}
        for name, ty in self.decls:
            if name in self._index:
                raise ValueError(f"duplicate declaration of {name!r}")
            self._index[name] = ty

    def extend(self, name: str, ty: Term) -> Context:
        return Context(self.decls + ((name, ty),))

    def lookup(self, name: str) -> Term | None:
        return self._index.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.decls)

    def __len__(self) -> int:
        return len(self.decls)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Context(self.decls[i])
        return self.decls[i]

    def names(self):
        return self._index.keys()

    def __eq__(self, other) -> bool:
        return isinstance(other, Context) and self.decls == other.decls

    def __hash__(self) -> int:
        return hash(self.decls)

    def __repr__(self) -> str:
        return f"Context({list(self.decls)!r})"

    def __str__(self) -> str:
        from lpimod.surface import print_context

        return print_context(self)


EMPTY = Context()
