import random

import pytest

import oracle
from lpimod.corpus import data_text
from lpimod.generate import TermGenerator
from lpimod.lpi import (
    Level,
    convertible_mod,
    infer_lpi,
    level_of,
    lpi_kernel,
    validate_rewrite_rule,
    validate_signature,
)
from lpimod.outcome import Conv, Fuel, Ill, Ok, OutOfFuel, Typed, Unknown
from lpimod.reduction import beta_r_step
from lpimod.rewriting import RewriteRule, RuleError, Signature, check_rule_shape, match_pattern, rewrite_step
from lpimod.surface import parse_signature, parse_term
from lpimod.syntax import EMPTY, Const, Context, Prod, Sort, Var, free_vars

DELTA_DECLS = "alpha : Type. c : alpha. f : alpha -> Type."
LPI_CTX = "nat : u_Type, z : eps_Type nat, s : eps_Type nat -> eps_Type nat, A : u_Prop"


# -- matching and rewriting --------------------------------------------------


def test_match_constant_pattern(lpi):
    assert match_pattern(lpi.term("eps_Type dot_Prop"), lpi.term("eps_Type dot_Prop")) == {}
    assert match_pattern(lpi.term("eps_Type dot_Prop"), lpi.term("eps_Type nat")) is None


def test_match_binds_pattern_variables(lpi):
    lhs = lpi.term("eps_Type (pi_Type_Type_Type A B)")
    code = lpi.term(r"\x:eps_Type nat. nat")
    sigma = match_pattern(lhs, lpi.term(r"eps_Type (pi_Type_Type_Type nat (\x:eps_Type nat. nat))"))
    assert sigma == {"A": Var("nat"), "B": code}


def test_rewrite_step_examples(hol_emb, lpi):
    sig = hol_emb.signature
    assert rewrite_step(sig, lpi.term("eps_Kind dot_Type")) == lpi.term("u_Type")
    got = rewrite_step(sig, lpi.term("eps_Type (pi_Type_Type_Type nat B)"))
    assert got == lpi.term("!x:eps_Type nat. eps_Type (B x)")
    assert rewrite_step(sig, lpi.term("u_Type")) is None


def test_rewrite_step_is_leftmost_outermost(hol_emb, lpi):
    t = lpi.term(r"\y:eps_Kind dot_Type. eps_Kind dot_Prop")
    assert rewrite_step(hol_emb.signature, t) == lpi.term(r"\y:u_Type. eps_Kind dot_Prop")


def test_rewrite_under_binder_keeps_bound_variables(hol_emb, lpi):
    t = lpi.term(r"\a:u_Type. eps_Type (pi_Type_Type_Type a (\x:eps_Type a. a))")
    expected = lpi.term(r"\a:u_Type. !y:eps_Type a. eps_Type ((\x:eps_Type a. a) y)")
    assert rewrite_step(hol_emb.signature, t) == expected


def test_convertible_mod_examples(hol_emb, lpi):
    sig = hol_emb.signature
    assert convertible_mod(sig, lpi.term("eps_Kind dot_Type"), lpi.term("u_Type")) is Conv.YES
    assert convertible_mod(sig, lpi.term("u_Type"), lpi.term("u_Prop")) is Conv.NO


def test_rules_fire_after_beta_exposes_the_argument(hol_emb, lpi):
    left = lpi.term(r"eps_Kind ((\t:u_Kind. t) dot_Type)")
    assert convertible_mod(hol_emb.signature, left, lpi.term("u_Type")) is Conv.YES


# -- typing ------------------------------------------------------------------


def test_infer_translated_identity(hol_emb, lpi):
    outcome = infer_lpi(hol_emb.signature, EMPTY, lpi.term(r"\a:u_Type. \x:eps_Type a. x"))
    assert outcome == Typed(lpi.term("!a:u_Type. eps_Type a -> eps_Type a"))


def test_delta_types_modulo_its_rule():
    sig = parse_signature(data_text("delta.sig"))
    assert validate_signature(sig)
    delta = parse_term(data_text("delta.t"), lpi_kernel(sig).spec, sig)
    assert infer_lpi(sig, EMPTY, delta) == Typed(parse_term("f c -> f c", signature=sig))


def test_delta_under_the_alternative_rule_is_ill_typed():
    sig = parse_signature(DELTA_DECLS + r" [] f c --> (!y:alpha. f y) -> f c.")
    assert validate_signature(sig)
    delta = parse_term(r"\x:f c. x c x", signature=sig)
    assert isinstance(infer_lpi(sig, EMPTY, delta), Ill)


def test_literal_parenthesisation_breaks_the_free_variable_condition():
    sig = parse_signature(DELTA_DECLS + r" [] f c --> (!y:alpha. f y) -> f y.")
    outcome = validate_signature(sig)
    assert isinstance(outcome, Ill) and "free-variable condition" in outcome.explanation


def test_constant_misuse(hol_emb, lpi):
    outcome = infer_lpi(hol_emb.signature, EMPTY, lpi.term("eps_Type u_Type"))
    assert isinstance(outcome, Ill) and outcome.rule == "Application"


# -- rule validation -----------------------------------------------------------


def test_validate_axiom_rule(hol_emb, lpi):
    rule = next(r for r in hol_emb.signature.rules if r.lhs == lpi.term("eps_Kind dot_Type"))
    base = Signature(hol_emb.signature.decls)
    assert validate_rewrite_rule(base, rule) == Typed(Sort("Type"))


def test_validate_product_rule(hol_emb):
    rule = next(r for r in hol_emb.signature.rules if r.head == "eps_Type" and r.arity == 1 and r.delta)
    assert [x for x, _ in rule.delta] == ["A", "B"]
    assert validate_rewrite_rule(Signature(hol_emb.signature.decls), rule) == Typed(Sort("Type"))


def test_rule_with_unbound_rhs_variable(hol_emb, lpi):
    rule = RewriteRule(Context([("A", lpi.term("u_Type"))]), lpi.term("eps_Type A"), Var("Z"))
    outcome = validate_rewrite_rule(hol_emb.signature, rule)
    assert isinstance(outcome, Ill) and outcome.rule == "Rule"
    with pytest.raises(RuleError, match="free-variable"):
        check_rule_shape(rule)


def test_rule_shape_violations(lpi):
    u = lpi.term("u_Type")
    with pytest.raises(RuleError, match="left-linear"):
        check_rule_shape(RewriteRule(Context([("A", u)]), lpi.term("pi_Type_Type_Type A A"), Var("A")))
    with pytest.raises(RuleError, match="constant applied"):
        check_rule_shape(RewriteRule(Context([("A", u)]), Var("A"), Var("A")))


def test_ill_typed_rule_sides(hol_emb, lpi):
    rule = RewriteRule(EMPTY, lpi.term("eps_Kind dot_Type"), lpi.term("dot_Prop"))
    outcome = validate_rewrite_rule(Signature(hol_emb.signature.decls), rule)
    assert isinstance(outcome, Ill) and "right-hand side" in outcome.explanation


def test_generated_signature_validates(hol_emb):
    outcome = validate_signature(hol_emb.signature)
    assert isinstance(outcome, Ok)


# -- levels --------------------------------------------------------------------


def test_level_of(hol_emb, lpi):
    sig = hol_emb.signature
    assert level_of(sig, EMPTY, lpi.term("u_Type")) is Level.KIND
    assert level_of(sig, EMPTY, lpi.term("dot_Type")) is Level.TYPE
    assert level_of(sig, EMPTY, lpi.term(r"\a:u_Type. eps_Type a")) is Level.KIND
    # its product type u_Type -> u_Type is typed by Type
    assert level_of(sig, EMPTY, lpi.term(r"\a:u_Type. a")) is Level.TYPE
    assert isinstance(level_of(sig, EMPTY, Sort("Type")), Ill)
    assert isinstance(level_of(sig, EMPTY, Var("nope")), Ill)


# -- sampled properties ----------------------------------------------------------


@pytest.fixture(scope="module")
def lpi_samples(hol_emb, lpi):
    gen = TermGenerator(lpi_kernel(hol_emb.signature), random.Random(7), max_depth=3)
    return gen.samples(lpi.ctx(LPI_CTX), 120)


def test_rewriting_preserves_free_variables(hol_emb, lpi_samples):
    for s in lpi_samples:
        t = s.term
        while (new := rewrite_step(hol_emb.signature, t)) is not None:
            assert free_vars(new) <= free_vars(t)
            t = new


def test_subject_reduction_modulo(hol_emb, lpi_samples):
    sig = hol_emb.signature
    for s in lpi_samples:
        t = s.term
        for _ in range(6):
            t = beta_r_step(sig.index, t)
            if t is None:
                break
            outcome = infer_lpi(sig, s.ctx, t)
            assert isinstance(outcome, Typed)
            assert convertible_mod(sig, outcome.type, s.type) is Conv.YES


def test_product_compatibility(hol_emb, lpi_samples):
    sig = hol_emb.signature
    products = [s.type for s in lpi_samples if isinstance(s.type, Prod)]
    for a in products:
        for b in products[:10]:
            if convertible_mod(sig, a, b) is Conv.YES:
                assert convertible_mod(sig, a.ty, b.ty) is Conv.YES
                assert convertible_mod(sig, a.body, b.body) is Conv.YES


def test_beta_r_normal_forms_match_oracle(hol_emb, lpi_samples):
    from lpimod.reduction import normalize

    rules = oracle.oracle_rules(hol_emb.signature)
    for s in lpi_samples:
        expected = oracle.normal_form(oracle.to_named(s.term), rules)
        got = normalize(s.term, None, hol_emb.signature.index)
        assert expected is not None and not isinstance(got, Unknown)
        assert oracle.alpha(oracle.to_named(got), expected)


def test_whnf_spends_fuel_on_rewrites(hol_emb, lpi):
    kernel = lpi_kernel(hol_emb.signature)
    fuel = Fuel(5)
    assert kernel.whnf(lpi.term("eps_Kind dot_Type"), fuel) == Const("u_Type")
    assert fuel.spent == 1
    with pytest.raises(OutOfFuel):
        kernel.whnf(lpi.term("eps_Kind dot_Type"), Fuel(0))
