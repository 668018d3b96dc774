"""Command-line front end.

Exit codes: 0 success, 1 typing error, 2 fuel exhausted, 3 usage or parse
error.  Arguments naming a file may also be given as literal text.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from lpimod.builtins import ALIASES, BUILTINS, builtin
from lpimod.checker import Kernel, check_with, infer_with
from lpimod.conservativity import (
    ExtractionError,
    OutsideImage,
    extract_witness,
    inverse_term,
    inverse_type,
    minimal_completion,
)
from lpimod.embedding import build_embedding, translate_term, translate_type
from lpimod.lpi import check_lpi, infer_lpi, lpi_kernel, validate_signature
from lpimod.outcome import DEFAULT_FUEL, Conv, Fuel, Ill, IllTyped, OutOfFuel, Typed, Unknown
from lpimod.reduction import conv
from lpimod.rewriting import Signature
from lpimod.specification import SpecError, validate_spec
from lpimod.surface import (
    ParseError,
    parse_context,
    parse_signature,
    parse_spec,
    parse_term,
    print_context,
    print_signature,
    print_term,
)
from lpimod.syntax import EMPTY

OK, ILL, UNKNOWN, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_text(value: str) -> str:
    """Contents of the file ``value`` names, or ``value`` itself."""
    path = Path(value)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {value}: {e}") from None
    return value


def load_spec(value: str):
    if value in BUILTINS or value in ALIASES:
        return builtin(value)
    path = Path(value)
    if not path.is_file():
        raise UsageError(f"{value} is neither a specification file nor a built-in ({', '.join(BUILTINS)})")
    spec = parse_spec(path.read_text(encoding="utf-8"), path.stem)
    validate_spec(spec)
    return spec


def load_signature(value: str, fuel: Fuel) -> Signature:
    sig = parse_signature(read_text(value))
    outcome = validate_signature(sig, fuel)
    if not outcome:
        raise _Failed(outcome, "signature")
    return sig


class _Failed(Exception):
    def __init__(self, outcome, what: str = ""):
        super().__init__(str(outcome))
        self.outcome = outcome
        self.what = what


def _report(outcome, out, err) -> int:
    match outcome:
        case Typed(ty):
            print(print_term(ty), file=out)
            return OK
        case Ill():
            print(str(outcome), file=err)
            return ILL
        case Unknown():
            print(str(outcome), file=err)
            return UNKNOWN
    print(str(outcome), file=out)
    return OK


# -- subcommands -------------------------------------------------------------


def cmd_pts_check(args, fuel, out, err) -> int:
    spec = load_spec(args.spec)
    ctx = parse_context(read_text(args.ctx), spec) if args.ctx else EMPTY
    term = parse_term(read_text(args.term), spec)
    kernel = Kernel(spec)
    if args.type:
        outcome = check_with(kernel, ctx, term, parse_term(read_text(args.type), spec), fuel)
    else:
        outcome = infer_with(kernel, ctx, term, fuel)
    return _report(outcome, out, err)


def cmd_lpi_check(args, fuel, out, err) -> int:
    sig = load_signature(args.sig, fuel)
    ctx = parse_context(read_text(args.ctx), None, sig) if args.ctx else EMPTY
    lpi = lpi_kernel(sig).spec
    term = parse_term(read_text(args.term), lpi, sig)
    if args.type:
        outcome = check_lpi(sig, ctx, term, parse_term(read_text(args.type), lpi, sig), fuel)
    else:
        outcome = infer_lpi(sig, ctx, term, fuel)
    return _report(outcome, out, err)


def cmd_embed(args, fuel, out, err) -> int:
    spec = load_spec(args.spec)
    emb = build_embedding(spec, fuel)
    ctx = parse_context(read_text(args.ctx), spec) if args.ctx else EMPTY
    if args.term:
        print(print_term(translate_term(emb, ctx, parse_term(read_text(args.term), spec), fuel)), file=out)
    elif args.type:
        print(print_term(translate_type(emb, ctx, parse_term(read_text(args.type), spec), fuel)), file=out)
    else:
        print(print_signature(emb.signature), file=out)
    return OK


def cmd_complete(args, fuel, out, err) -> int:
    cspec = minimal_completion(load_spec(args.spec))
    print(str(cspec.completed), file=out)
    return OK


def cmd_invert(args, fuel, out, err) -> int:
    emb = build_embedding(load_spec(args.spec), fuel)
    sig = emb.signature
    text = read_text(args.term)
    t = parse_term(text, lpi_kernel(sig).spec, sig)
    result = inverse_type(emb, t) if args.as_type else inverse_term(emb, t)
    print(print_term(result), file=out)
    return OK


def cmd_extract(args, fuel, out, err) -> int:
    spec = load_spec(args.spec)
    emb = build_embedding(spec, fuel)
    cspec = minimal_completion(spec)
    sig = emb.signature
    ctx = parse_context(read_text(args.ctx), spec)
    ty = parse_term(read_text(args.type), spec)
    n = parse_term(read_text(args.term), lpi_kernel(sig).spec, sig)
    try:
        trace = extract_witness(emb, cspec, ctx, ty, n, fuel)
    except ExtractionError as e:
        print(f"extraction failed at stage {e.stage}", file=err)
        return _report(e.outcome, out, err)
    if args.trace:
        print(f"context:    {print_context(ctx)}", file=out)
        print(f"type:       {print_term(ty)}", file=out)
        print(f"input:      {print_term(trace.input)}", file=out)
        for t, count in trace.kind_steps:
            print(f"  kind-level redexes {count}: {print_term(t)}", file=out)
        print(f"eliminated: {print_term(trace.eliminated)}", file=out)
        print(f"inverted:   {print_term(trace.inverted)}", file=out)
        for i, t in enumerate(trace.tau_steps):
            print(f"  tau-reduction {i}: {print_term(t)}", file=out)
        for stage, outcome in trace.checks:
            print(f"  check {stage}: {'ok' if outcome else outcome}", file=out)
    print(f"witness: {print_term(trace.witness)}", file=out)
    return OK


def cmd_conv(args, fuel, out, err) -> int:
    if args.sig:
        sig = load_signature(args.sig, fuel)
        spec, rules = lpi_kernel(sig).spec, sig.index
    else:
        spec, sig, rules = load_spec(args.spec), None, None
    a = parse_term(read_text(args.left), spec, sig)
    b = parse_term(read_text(args.right), spec, sig)
    try:
        answer = Conv.YES if conv(a, b, fuel, rules) else Conv.NO
    except OutOfFuel as e:
        print(f"unknown: {e}", file=err)
        return UNKNOWN
    print(answer.value, file=out)
    return OK if answer is Conv.YES else ILL


def cmd_corpus(args, fuel, out, err) -> int:
    """Check every bundled judgment in its system and after translation."""
    from lpimod.corpus import load_corpus
    from lpimod.embedding import translate_judgment

    failures = 0
    embeddings = {}
    for j in load_corpus():
        if args.system and j.system != args.system:
            continue
        if j.system not in embeddings:
            embeddings[j.system] = build_embedding(j.spec)
        emb = embeddings[j.system]
        source = check_with(Kernel(j.spec), j.ctx, j.term, j.type, Fuel(fuel.budget))
        try:
            translated = check_lpi(emb.signature, *translate_judgment(emb, j.ctx, j.term, j.type), Fuel(fuel.budget))
        except IllTyped as e:
            translated = Ill("Translation", str(e))
        except OutOfFuel as e:
            translated = Unknown(str(e))
        ok = bool(source) and bool(translated)
        failures += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {j.system:<13} {j.name}", file=out)
        for outcome in (source, translated):
            if not outcome:
                print(f"     {outcome}", file=out)
    return ILL if failures else OK


# -- dispatch ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--fuel", type=int, default=argparse.SUPPRESS, help=f"step budget (default {DEFAULT_FUEL})")
    common.add_argument("--trace", action="store_true", default=argparse.SUPPRESS, help="print intermediate stages")

    parser = _Parser(prog="lpimod", description=__doc__.splitlines()[0])
    parser.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    parser.add_argument("--trace", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pts-check", parents=[common], help="type-check a term in a pure type system")
    p.add_argument("--spec", required=True)
    p.add_argument("--ctx")
    p.add_argument("--type")
    p.add_argument("term")
    p.set_defaults(run=cmd_pts_check)

    p = sub.add_parser("lpi-check", parents=[common], help="type-check a term modulo a signature")
    p.add_argument("--sig", required=True)
    p.add_argument("--ctx")
    p.add_argument("--type")
    p.add_argument("term")
    p.set_defaults(run=cmd_lpi_check)

    p = sub.add_parser("embed", parents=[common], help="print the generated signature or translate")
    p.add_argument("--spec", required=True)
    p.add_argument("--ctx")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--emit-signature", action="store_true")
    group.add_argument("--term")
    group.add_argument("--type")
    p.set_defaults(run=cmd_embed)

    p = sub.add_parser("complete", parents=[common], help="print the minimal completion")
    p.add_argument("--spec", required=True)
    p.set_defaults(run=cmd_complete)

    p = sub.add_parser("invert", parents=[common], help="inverse translation of a lambda-Pi term")
    p.add_argument("--spec", required=True)
    p.add_argument("--as-type", action="store_true", help="translate as a type (psi) rather than a term (phi)")
    p.add_argument("term")
    p.set_defaults(run=cmd_invert)

    p = sub.add_parser("extract", parents=[common], help="extract a source witness from a lambda-Pi proof")
    p.add_argument("--spec", required=True)
    p.add_argument("--ctx", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("term")
    p.set_defaults(run=cmd_extract)

    p = sub.add_parser("conv", parents=[common], help="decide convertibility of two terms")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec")
    source.add_argument("--sig")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_conv)

    p = sub.add_parser("corpus", parents=[common], help="check the bundled corpus")
    p.add_argument("--system")
    p.set_defaults(run=cmd_corpus)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.fuel < 0:
            raise UsageError("--fuel must be non-negative")
        fuel = Fuel(args.fuel)
        try:
            return args.run(args, fuel, out, err)
        finally:
            if args.trace:
                print(f"fuel spent: {fuel.spent}", file=err)
    except UsageError as e:
        print(f"usage error: {e}", file=err)
        return USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        return USAGE
    except (SpecError, KeyError) as e:
        print(f"specification error: {e}", file=err)
        return USAGE
    except _Failed as e:
        print(f"invalid {e.what}:", file=err)
        return _report(e.outcome, out, err)
    except IllTyped as e:
        print(str(Ill(e.rule, e.explanation, e.location)), file=err)
        return ILL
    except OutsideImage as e:
        print(str(e), file=err)
        return ILL
    except OutOfFuel as e:
        print(f"unknown: {e}", file=err)
        return UNKNOWN
    except SystemExit as e:
        # --help exits through argparse
        return OK if e.code in (0, None) else USAGE


if __name__ == "__main__":
    sys.exit(main())
