"""Pure type systems, lambda-Pi modulo rewriting, and the embedding between them."""

from lpimod.builtins import builtin, builtin_specs
from lpimod.checker import check, classify_type, infer, wf_context
from lpimod.outcome import DEFAULT_FUEL, Conv, Fuel, Ill, Ok, OutOfFuel, Typed, Unknown
from lpimod.reduction import beta_step, convertible, normalize
from lpimod.specification import TAU, Specification, validate_spec
from lpimod.surface import parse_context, parse_signature, parse_spec, parse_term, print_term
from lpimod.syntax import EMPTY, Abs, App, BVar, Const, Context, Prod, Sort, Term, Var

__all__ = [
    "DEFAULT_FUEL", "EMPTY", "TAU",
    "Abs", "App", "BVar", "Const", "Context", "Conv", "Fuel", "Ill", "Ok", "OutOfFuel",
    "Prod", "Sort", "Specification", "Term", "Typed", "Unknown", "Var",
    "beta_step", "builtin", "builtin_specs", "check", "classify_type", "convertible",
    "infer", "normalize", "parse_context", "parse_signature", "parse_spec", "parse_term",
    "print_term", "validate_spec", "wf_context",
]
