"""Built-in specifications, by name."""

from __future__ import annotations

from lpimod.specification import Specification

_TK = [("Type", "Kind")]

BUILTINS: dict[str, Specification] = {
    "lambda-arrow": Specification.build(["Type", "Kind"], _TK, [("Type", "Type")], "lambda-arrow"),
    "lambda-2": Specification.build(["Type", "Kind"], _TK, [("Type", "Type"), ("Kind", "Type")], "lambda-2"),
    "lambda-P": Specification.build(["Type", "Kind"], _TK, [("Type", "Type"), ("Type", "Kind")], "lambda-P"),
    "lambda-C": Specification.build(
        ["Type", "Kind"],
        _TK,
        [("Type", "Type"), ("Kind", "Type"), ("Type", "Kind"), ("Kind", "Kind")],
        "lambda-C",
    ),
    "HOL": Specification.build(
        ["Prop", "Type", "Kind"],
        [("Prop", "Type"), ("Type", "Kind")],
        [("Prop", "Prop"), ("Type", "Type"), ("Type", "Prop")],
        "HOL",
    ),
    "U-minus": Specification.build(
        ["Prop", "Type", "Kind"],
        [("Prop", "Type"), ("Type", "Kind")],
        [("Prop", "Prop"), ("Type", "Type"), ("Type", "Prop"), ("Kind", "Type")],
        "U-minus",
    ),
}

ALIASES = {
    "arrow": "lambda-arrow",
    "stlc": "lambda-arrow",
    "system-f": "lambda-2",
    "lambda-pi": "lambda-P",
    "coc": "lambda-C",
    "hol": "HOL",
    "uminus": "U-minus",
    "u-minus": "U-minus",
}


def builtin_specs() -> dict[str, Specification]:
    return dict(BUILTINS)


def builtin(name: str) -> Specification:
    key = ALIASES.get(name, name)
    try:
        return BUILTINS[key]
    except KeyError:
        raise KeyError(f"no built-in specification named {name!r}") from None
