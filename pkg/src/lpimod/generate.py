"""Random well-typed terms, for property testing.

Generation is type-directed: ask for a term of a given type and the
generator picks among sorts, products, abstractions, applied heads and
beta-redexes that could have it.  Dependent argument types are handled by
generating and then checking, so every result is re-checked by the kernel
and discarded if it fails; the kernel, not the generator, is trusted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from lpimod.checker import Kernel
from lpimod.outcome import DEFAULT_FUEL, Fuel, IllTyped, OutOfFuel
from lpimod.syntax import (
    Abs,
    App,
    Const,
    Context,
    Prod,
    Sort,
    Term,
    Var,
    abstract,
    instantiate,
    open_binder,
    spine,
)


@dataclass(frozen=True)
class Sample:
    ctx: Context
    term: Term
    type: Term


class TermGenerator:
    def __init__(self, kernel: Kernel, rng: random.Random, max_depth: int = 3, redex_rate: float = 0.25):
        self.kernel = kernel
        self.rng = rng
        self.max_depth = max_depth
        self.redex_rate = redex_rate
        self.fuel = Fuel(DEFAULT_FUEL)
        # samples whose final kernel check ran out of fuel
        self.exhausted = 0
        self.checked = 0

    # -- helpers -------------------------------------------------------------

    def _whnf(self, t: Term) -> Term:
        return self.kernel.whnf(t, self.fuel)

    def _conv(self, a: Term, b: Term) -> bool:
        try:
            return self.kernel.conv(a, b, Fuel(2_000))
        except OutOfFuel:
            return False

    def _heads(self, ctx: Context) -> list[tuple[Term, Term]]:
        out = [(Var(x), a) for x, a in ctx]
        if self.kernel.signature is not None:
            out += [(Const(c), a) for c, a in self.kernel.signature.decls]
        return out

    def _codomain_head(self, t: Term, limit: int = 12):
        for _ in range(limit):
            t = self._whnf(t)
            if not isinstance(t, Prod):
                break
            t = t.body
        head = spine(t)[0]
        return head if not isinstance(head, (Abs, Prod)) else None

    # -- generation ----------------------------------------------------------

    def term(self, ctx: Context, target: Term, depth: int | None = None) -> Term | None:
        """A term of type ``target`` in ``ctx``, or None if none was found."""
        depth = self.max_depth if depth is None else depth
        try:
            target = self._whnf(target)
        except OutOfFuel:
            return None
        moves = ["head", "head"]
        if isinstance(target, Sort):
            moves += ["sort", "prod", "prod"]
        if isinstance(target, Prod):
            moves += ["abs", "abs", "abs"]
        if depth > 0 and self.rng.random() < self.redex_rate:
            moves.insert(0, "redex")
        else:
            self.rng.shuffle(moves)
        for move in dict.fromkeys(moves):
            result = getattr(self, f"_{move}")(ctx, target, depth)
            if result is not None:
                return result
        return None

    def _sort(self, ctx, target: Sort, depth):
        options = sorted(s for s, s2 in self.kernel.spec.axioms.items() if s2 == target.name)
        return Sort(self.rng.choice(options)) if options else None

    def _prod(self, ctx, target: Sort, depth):
        if depth <= 0:
            return None
        pairs = sorted(k for k, s3 in self.kernel.spec.rules.items() if s3 == target.name)
        if not pairs:
            return None
        s1, s2 = self.rng.choice(pairs)
        a = self.term(ctx, Sort(s1), depth - 1)
        if a is None:
            return None
        x = self._fresh(ctx)
        b = self.term(ctx.extend(x, a), Sort(s2), depth - 1)
        if b is None:
            return None
        return Prod(x, a, abstract(b, x))

    def _abs(self, ctx, target: Prod, depth):
        x = self._fresh(ctx, target.hint)
        body = self.term(ctx.extend(x, target.ty), open_binder(target.body, x), max(depth - 1, 0))
        if body is None:
            return None
        return Abs(x, target.ty, abstract(body, x))

    def _head(self, ctx, target, depth):
        want = spine(target)[0] if not isinstance(target, Sort) else target
        heads = self._heads(ctx)
        self.rng.shuffle(heads)
        for head, ty in heads:
            if self._codomain_head(ty) != want:
                continue
            result = self._apply(ctx, head, ty, target, depth)
            if result is not None:
                return result
        return None

    def _apply(self, ctx, head: Term, ty: Term, target: Term, depth: int):
        term = head
        for _ in range(8):
            if self._conv(ty, target) and (depth <= 0 or self.rng.random() < 0.8):
                return term
            ty = self._whnf(ty)
            if not isinstance(ty, Prod) or depth <= 0:
                return None
            arg = self.term(ctx, ty.ty, depth - 1)
            if arg is None:
                return None
            term = App(term, arg)
            ty = instantiate(ty.body, arg)
        return None

    def _redex(self, ctx, target, depth):
        try:
            s2 = self.kernel.is_ctx_type(ctx, target, self.fuel)
        except (IllTyped, OutOfFuel):
            return None
        if s2 is None:
            return None
        firsts = sorted(s1 for (s1, t2), s3 in self.kernel.spec.rules.items() if t2 == s2)
        if not firsts:
            return None
        s1 = self.rng.choice(firsts)
        a = self.term(ctx, Sort(s1), depth - 1)
        if a is None:
            return None
        n = self.term(ctx, a, depth - 1)
        if n is None:
            return None
        x = self._fresh(ctx)
        body = self.term(ctx.extend(x, a), target, depth - 1)
        if body is None:
            return None
        return App(Abs(x, a, abstract(body, x)), n)

    def _fresh(self, ctx: Context, hint: str = "x") -> str:
        return self.kernel.fresh(hint if hint != "_" else "x", ctx)

    # -- sampling ------------------------------------------------------------

    def target(self, ctx: Context) -> Term | None:
        """A random type: a sort, or a term of some sort."""
        sorts = sorted(self.kernel.spec.sorts)
        s = self.rng.choice(sorts)
        if self.rng.random() < 0.15:
            return Sort(s)
        return self.term(ctx, Sort(s), self.max_depth - 1)

    def sample(self, ctx: Context, target: Term | None = None) -> Sample | None:
        """One kernel-checked sample, or None when generation or checking failed."""
        self.fuel = Fuel(DEFAULT_FUEL)
        try:
            if target is None:
                target = self.target(ctx)
                if target is None:
                    return None
            t = self.term(ctx, target)
            if t is None:
                return None
        except (IllTyped, OutOfFuel):
            return None
        self.checked += 1
        try:
            fuel = Fuel(DEFAULT_FUEL)
            inferred = self.kernel.infer(ctx, t, fuel)
            if not self.kernel.conv(inferred, target, fuel):
                return None
        except IllTyped:
            return None
        except OutOfFuel:
            self.exhausted += 1
            return None
        return Sample(ctx, t, target)

    def samples(self, ctx: Context, n: int, attempts: int | None = None) -> list[Sample]:
        out: list[Sample] = []
        for _ in range(attempts or 20 * n):
            if len(out) == n:
                break
            s = self.sample(ctx)
            if s is not None:
                out.append(s)
        return out
