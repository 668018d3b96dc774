import random

import pytest

from lpimod.builtins import builtin
from lpimod.checker import Kernel
from lpimod.corpus import load_corpus
from lpimod.embedding import (
    build_embedding,
    translate_context,
    translate_judgment,
    translate_term,
    translate_type,
)
from lpimod.generate import TermGenerator
from lpimod.lpi import LPI_SPEC, check_lpi, convertible_mod, validate_rewrite_rule, validate_signature
from lpimod.outcome import Conv, Fuel, IllTyped, Ok, Typed
from lpimod.reduction import beta_step, redex_positions
from lpimod.rewriting import Signature
from lpimod.specification import Specification, SpecError
from lpimod.surface import parse_context, parse_term
from lpimod.syntax import EMPTY, App, Const, Sort

COC = builtin("lambda-C")
HOL_CTX = "nat : Type, z : nat, s : nat -> nat, Q : nat -> Prop, q0 : Q z, A : Prop"


@pytest.fixture(scope="module")
def coc_emb():
    return build_embedding(COC)


def read(emb, text):
    return parse_term(text, LPI_SPEC, emb.signature)


def test_hol_counts(hol_emb):
    assert len(hol_emb.u) == len(hol_emb.eps) == 3
    assert len(hol_emb.dot) == 2 and len(hol_emb.pi) == 3
    rules = hol_emb.signature.rules
    assert sum(1 for r in rules if not r.delta) == 2
    assert sum(1 for r in rules if r.delta) == 3
    assert len(hol_emb.signature.decls) == 11


def test_lambda_arrow_counts():
    emb = build_embedding(builtin("lambda-arrow"))
    assert (len(emb.u), len(emb.eps), len(emb.dot), len(emb.pi)) == (2, 2, 1, 1)


def test_declarations_have_the_expected_types(hol_emb):
    sig = hol_emb.signature
    assert sig.lookup("u_Prop") == Sort("Type")
    assert sig.lookup("eps_Prop") == read(hol_emb, "u_Prop -> Type")
    assert sig.lookup("dot_Prop") == Const("u_Type")
    assert sig.lookup("pi_Type_Prop_Prop") == read(hol_emb, "!a:u_Type. (eps_Type a -> u_Prop) -> u_Prop")


def test_every_generated_rule_validates():
    for name in ("lambda-arrow", "lambda-2", "lambda-P", "lambda-C", "HOL", "U-minus"):
        emb = build_embedding(builtin(name))
        decls = Signature(emb.signature.decls)
        for rule in emb.signature.rules:
            assert isinstance(validate_rewrite_rule(decls, rule), Typed), rule
        assert isinstance(validate_signature(emb.signature), Ok)


def test_roles(hol_emb):
    assert hol_emb.role("pi_Type_Type_Type") == ("pi", ("Type", "Type", "Type"))
    assert hol_emb.role("dot_Type") == ("dot", "Type")
    assert hol_emb.role("nat") is None


def test_name_collision_is_an_error():
    # underscores in sort names can make two product codes share a name
    clash = Specification.build(["x_y", "x", "y_z", "z"], [], [("x_y", "z", "z"), ("x", "y_z", "z")])
    with pytest.raises(SpecError, match="collide"):
        build_embedding(clash)


def test_tau_cannot_be_embedded(hol_star):
    with pytest.raises(SpecError):
        build_embedding(hol_star.completed)


# -- translations ------------------------------------------------------------


def test_translate_sort(hol_emb, hol):
    assert translate_term(hol_emb, EMPTY, Sort("Prop")) == Const("dot_Prop")
    assert translate_type(hol_emb, EMPTY, Sort("Type")) == Const("u_Type")


def test_translate_polymorphic_identity(coc_emb):
    i = parse_term(r"\a:Type. \x:a. x", COC)
    assert translate_term(coc_emb, EMPTY, i) == read(coc_emb, r"\a:u_Type. \x:eps_Type a. x")
    ty = parse_term("!a:Type. a -> a", COC)
    expected = read(
        coc_emb, r"pi_Kind_Type_Type dot_Type (\a:u_Type. pi_Type_Type_Type a (\x:eps_Type a. a))"
    )
    assert translate_term(coc_emb, EMPTY, ty) == expected
    assert translate_type(coc_emb, EMPTY, ty) == read(coc_emb, "!a:u_Type. eps_Type a -> eps_Type a")


def test_translate_type_fallback(hol_emb, hol):
    ctx = parse_context("nat : Type", hol)
    assert translate_type(hol_emb, ctx, parse_term("nat -> nat", hol)) == read(
        hol_emb, "!x:eps_Type nat. eps_Type nat"
    )


def test_translate_context(hol_emb, hol):
    assert translate_context(hol_emb, EMPTY) == EMPTY
    ctx = parse_context("nat : Type, z : nat", hol)
    assert translate_context(hol_emb, ctx) == parse_context(
        "nat : u_Type, z : eps_Type nat", LPI_SPEC, hol_emb.signature
    )


def test_translation_rejects_ill_typed_input(hol_emb, hol):
    with pytest.raises(IllTyped):
        translate_term(hol_emb, EMPTY, parse_term(r"\a:Type. \x:a. x", hol))
    with pytest.raises(IllTyped, match="clashes"):
        translate_context(hol_emb, parse_context("u_Prop : Type", hol))
    with pytest.raises(IllTyped):
        translate_type(hol_emb, parse_context("nat : Type, z : nat", hol), parse_term("z", hol))


# -- corpus-wide properties ----------------------------------------------------


@pytest.fixture(scope="module")
def corpus():
    return [(j, build_embedding(j.spec)) for j in load_corpus()]


def test_completeness_on_corpus(corpus):
    for j, emb in corpus:
        ctx, m, a = translate_judgment(emb, j.ctx, j.term, j.type)
        assert isinstance(check_lpi(emb.signature, ctx, m, a), Typed), j.name


def test_coherence_of_type_translations(corpus):
    for j, emb in corpus:
        kernel = Kernel(j.spec)
        a = j.type
        s = kernel.is_ctx_type(j.ctx, a, Fuel())
        if s is None:
            continue
        decoded = App(Const(emb.eps[s]), translate_term(emb, j.ctx, a))
        assert convertible_mod(emb.signature, decoded, translate_type(emb, j.ctx, a)) is Conv.YES, j.name


def test_reduction_is_preserved(hol_emb, hol):
    ctx = parse_context(HOL_CTX, hol)
    gen = TermGenerator(Kernel(hol), random.Random(11), max_depth=3, redex_rate=0.5)
    checked = 0
    for sample in gen.samples(ctx, 80):
        after = beta_step(sample.term)
        if after is None:
            continue
        before_t = translate_term(hol_emb, ctx, sample.term)
        after_t = translate_term(hol_emb, ctx, after)
        assert redex_positions(before_t, hol_emb.signature.index)
        assert convertible_mod(hol_emb.signature, before_t, after_t) is Conv.YES
        checked += 1
    assert checked >= 20
