"""PTS specifications (sorts, axioms, rules) and their validation."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

TAU = "@tau"
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class SpecError(ValueError):
    pass


def is_identifier(name: str) -> bool:
    return bool(_IDENT.match(name))


@dataclass(frozen=True, eq=False)
class Specification:
    """A functional specification: axioms and rules are partial maps."""

    sorts: frozenset[str]
    axioms: Mapping[str, str] = field(default_factory=dict)
    rules: Mapping[tuple[str, str], str] = field(default_factory=dict)
    name: str = ""

    @classmethod
    def build(
        cls,
        sorts: Iterable[str],
        axioms: Iterable[tuple[str, str]] = (),
        rules: Iterable[tuple[str, ...]] = (),
        name: str = "",
    ) -> Specification:
        """Build from relations, rejecting non-functional input.

        Rules may be given as ``(s1, s2)`` for ``(s1, s2, s2)``.
        """
        ax: dict[str, str] = {}
        for s1, s2 in axioms:
            if ax.setdefault(s1, s2) != s2:
                raise SpecError(f"axioms are not functional at {s1}: {ax[s1]} and {s2}")
        rl: dict[tuple[str, str], str] = {}
        for r in rules:
            if len(r) == 2:
                r = (r[0], r[1], r[1])
            s1, s2, s3 = r
            if rl.setdefault((s1, s2), s3) != s3:
                raise SpecError(f"rules are not functional at ({s1}, {s2}): {rl[s1, s2]} and {s3}")
        return cls(frozenset(sorts), ax, rl, name)

    def axiom(self, s: str) -> str | None:
        return self.axioms.get(s)

    def rule(self, s1: str, s2: str) -> str | None:
        return self.rules.get((s1, s2))

    def top_sorts(self) -> frozenset[str]:
        return frozenset(s for s in self.sorts if s not in self.axioms)

    def is_full(self) -> bool:
        return all((a, b) in self.rules for a, b in product(self.sorts, repeat=2))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Specification)
            and self.sorts == other.sorts
            and dict(self.axioms) == dict(other.axioms)
            and dict(self.rules) == dict(other.rules)
        )

    def __hash__(self) -> int:
        return hash((self.sorts, frozenset(self.axioms.items()), frozenset(self.rules.items())))

    def __str__(self) -> str:
        from lpimod.surface import print_spec

        return print_spec(self)


@dataclass(frozen=True)
class SpecReport:
    functional: bool
    full: bool
    top_sorts: frozenset[str]


def validate_spec(spec: Specification) -> SpecReport:
    """Check sort names and references; raise ``SpecError`` on dangling sorts."""
    if not spec.sorts:
        raise SpecError("a specification needs at least one sort")
    for s in spec.sorts:
        if not (is_identifier(s) or s == TAU):
            raise SpecError(f"invalid sort name {s!r}")
    for s1, s2 in spec.axioms.items():
        for s in (s1, s2):
            if s not in spec.sorts:
                raise SpecError(f"axiom ({s1} : {s2}) mentions undeclared sort {s}")
    for (s1, s2), s3 in spec.rules.items():
        for s in (s1, s2, s3):
            if s not in spec.sorts:
                raise SpecError(f"rule ({s1}, {s2}, {s3}) mentions undeclared sort {s}")
    # functionality holds by construction: axioms and rules are maps
    return SpecReport(functional=True, full=spec.is_full(), top_sorts=spec.top_sorts())
