import random

import pytest
from hypothesis import given, settings

from lpimod.builtins import builtin
from lpimod.corpus import data_text, load_corpus, parse_corpus
from lpimod.embedding import build_embedding
from lpimod.generate import TermGenerator
from lpimod.lpi import LPI_SPEC, lpi_kernel, validate_signature
from lpimod.outcome import Ok
from lpimod.specification import SpecError
from lpimod.surface import (
    ParseError,
    parse_context,
    parse_signature,
    parse_spec,
    parse_term,
    print_context,
    print_signature,
    print_spec,
    print_term,
)
from lpimod.syntax import Abs, App, BVar, Const, Prod, Sort, Var
from strategies import terms

HOL = builtin("HOL")


def test_parse_polymorphic_identity():
    t = parse_term(r"\a:Type. \x:a. x", HOL)
    assert t == Abs("a", Sort("Type"), Abs("x", BVar(0), BVar(0)))


def test_parse_arrow_as_product():
    t = parse_term("!a:Type. a -> a", HOL)
    assert t == Prod("a", Sort("Type"), Prod("_", BVar(0), BVar(1)))


def test_constants_under_a_signature():
    sig = parse_signature("alpha : Type. c : alpha. f : alpha -> Type.")
    assert parse_term("f c", signature=sig) == App(Const("f"), Const("c"))
    assert parse_term("f c") == App(Var("f"), Var("c"))


def test_unicode_notation():
    ascii_form = parse_term(r"\a:Type. !x:a. a -> a", HOL)
    assert parse_term("λa:Type. Πx:a. a → a", HOL) == ascii_form


def test_precedence_and_associativity():
    assert parse_term("f a b") == App(App(Var("f"), Var("a")), Var("b"))
    right = parse_term("A -> B -> C")
    assert right == Prod("_", Var("A"), Prod("_", Var("B"), Var("C")))
    # application binds tighter than the arrow
    assert parse_term("f a -> B") == Prod("_", App(Var("f"), Var("a")), Var("B"))
    # binders extend as far right as possible
    assert parse_term(r"\x:A. x y") == Abs("x", Var("A"), App(BVar(0), Var("y")))


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("\\a:Type.\n  \\x:a. (x", 2, 11),
        ("!a:Type. a ->", 1, 14),
        (r"\Type:Type. x", 1, 2),
        ("f ) g", 1, 3),
        ("x @tau", 1, 3),
    ],
)
def test_parse_errors_carry_locations(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_term(text, HOL)
    assert (err.value.line, err.value.col) == (line, col)
    assert str(err.value).startswith(f"{line}:{col}:")


def test_comments_are_ignored():
    assert parse_term("# identity\n\\x:A. x") == parse_term(r"\x:A. x")


def test_contexts():
    ctx = parse_context("nat : Type, z : nat", HOL)
    assert list(ctx) == [("nat", Sort("Type")), ("z", Var("nat"))]
    assert parse_context("nat : Type. z : nat.", HOL) == ctx
    assert print_context(ctx) == "nat : Type, z : nat"
    with pytest.raises(ParseError, match="duplicate"):
        parse_context("x : Type, x : Type", HOL)


def test_spec_files():
    assert parse_spec(data_text("hol.pts"), "HOL") == HOL
    assert parse_spec(data_text("uminus.pts")) == builtin("U-minus")
    assert parse_spec(print_spec(HOL)) == HOL
    with pytest.raises(SpecError):
        parse_spec("sort @tau")
    with pytest.raises(ParseError):
        parse_spec("sort Type\nrule Type")


def test_spec_rule_defaults_to_second_sort():
    spec = parse_spec("sort Type\nsort Kind\naxiom Type : Kind\nrule (Type, Kind)")
    assert spec.rule("Type", "Kind") == "Kind"


def test_printer_examples():
    assert print_term(parse_term("!a:Type. a -> a", HOL)) == "!a:Type. a -> a"
    text = r"(!a:Type. a -> a) -> (Prop -> Prop) -> f (g x) (\y:A. y)"
    assert print_term(parse_term(text, HOL)) == text


def test_printer_avoids_capture_of_free_variables():
    t = Abs("x", Var("A"), App(BVar(0), Var("x")))
    printed = print_term(t)
    assert printed != r"\x:A. x x"
    assert parse_term(printed) == t


def test_emitted_signature_reparses_and_validates():
    for name in ("HOL", "lambda-C", "U-minus"):
        sig = build_embedding(builtin(name)).signature
        again = parse_signature(print_signature(sig))
        assert again.decls == sig.decls
        # rule names are not part of the file format
        assert [(r.delta, r.lhs, r.rhs) for r in again.rules] == [(r.delta, r.lhs, r.rhs) for r in sig.rules]
        assert isinstance(validate_signature(again), Ok)


def test_corpus_round_trip():
    corpus = load_corpus()
    assert len(corpus) >= 25
    for j in corpus:
        assert parse_term(print_term(j.term), j.spec) == j.term
        assert parse_term(print_term(j.type), j.spec) == j.type
        assert parse_context(print_context(j.ctx), j.spec) == j.ctx


def test_corpus_format():
    text = "system HOL\njudgment id\nctx nat : Type\nterm \\x:nat. x\ntype nat -> nat\n"
    (j,) = parse_corpus(text)
    assert j.name == "id" and j.system == "HOL" and j.spec == HOL


@given(terms(max_leaves=16))
@settings(max_examples=300, deadline=None)
def test_print_parse_round_trip_on_random_terms(t):
    sig = parse_signature("c : Type. f : Type.")
    # open terms: parse free names back as variables, Type as a sort
    assert parse_term(print_term(t), HOL, sig) == t


def test_print_parse_round_trip_on_generated_lambda_pi_terms(hol_emb):
    ctx = parse_context("nat : u_Type, z : eps_Type nat", LPI_SPEC, hol_emb.signature)
    gen = TermGenerator(lpi_kernel(hol_emb.signature), random.Random(3))
    for s in gen.samples(ctx, 60):
        assert parse_term(print_term(s.term), LPI_SPEC, hol_emb.signature) == s.term
