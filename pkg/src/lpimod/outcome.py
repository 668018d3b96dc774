"""Judgment outcomes, typed errors and the fuel budget."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from lpimod.syntax import Term

DEFAULT_FUEL = 100_000


class OutOfFuel(Exception):
    pass


class Fuel:
    """Step budget shared by every reduction of one top-level judgment."""

    __slots__ = ("budget", "spent")

    def __init__(self, budget: int = DEFAULT_FUEL):
        if budget < 0:
            raise ValueError("fuel budget must be non-negative")
        self.budget = budget
        self.spent = 0

    def spend(self, n: int = 1) -> None:
        if self.budget < n:
            self.budget = 0
            raise OutOfFuel(f"fuel exhausted after {self.spent} steps")
        self.budget -= n
        self.spent += n

    def split(self) -> Fuel:
        """A detached copy with the same remaining budget."""
        return Fuel(self.budget)

    def __repr__(self) -> str:
        return f"Fuel({self.budget})"


def as_fuel(fuel: Fuel | int | None) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, int):
        return Fuel(fuel)
    return fuel


class IllTyped(Exception):
    """A typing rule failed; ``rule`` names the rule of the typing figure."""

    def __init__(self, rule: str, explanation: str, location: Term | None = None):
        super().__init__(f"{rule}: {explanation}")
        self.rule = rule
        self.explanation = explanation
        self.location = location


@dataclass(frozen=True)
class Typed:
    type: Term

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Ill:
    rule: str
    explanation: str
    location: Term | None = None

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        msg = f"{self.rule}: {self.explanation}"
        if self.location is not None:
            msg += f"\n  in: {self.location}"
        return msg


@dataclass(frozen=True)
class Unknown:
    reason: str = "fuel exhausted"

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"unknown: {self.reason}"


@dataclass(frozen=True)
class Ok:
    """Success of a judgment that carries no type (e.g. well-formedness)."""

    detail: str = ""

    def __bool__(self) -> bool:
        return True


CheckOutcome = Typed | Ill | Unknown


class Conv(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        return self is Conv.YES


def ill_of(err: IllTyped) -> Ill:
    return Ill(err.rule, err.explanation, err.location)
