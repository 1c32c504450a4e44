from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import erosion_chain, linear
from ultrafinite.arith import numeral
from ultrafinite.corpus import parikh_theory
from ultrafinite.families import DETOUR_THEORY, detour_family, parikh_chain
from ultrafinite.fis import Linear
from ultrafinite.formats import parse_formula, parse_proof, parse_theory
from ultrafinite.kernel import (ARITY, Composed, Constant, Derivation, Erosion, Factored, FromTTP,
                                FunctionPolicy, InfiniteSchema, MalformedDerivation, NotNaturalDeduction,
                                Product, Rule, Schema, TTP, ZeroDecay, check_derivation, credibility,
                                erosion_ttp, is_normal, leaf, logical_axiom_kind, mp, node_count,
                                normalize, normalize_steps, open_assumptions, product_ttp, symbol_count, ttp_credibility,
                                validate_ttp, zero_decay_ttp)
from ultrafinite.syntax import Atom

F = Fraction
E = F(1, 1024)
PARIKH = parikh_theory()


def test_rule_arities():
    assert ARITY[Rule.MP] == ARITY[Rule.AND_INTRO] == ARITY[Rule.NOT_ELIM] == 2
    assert ARITY[Rule.AND_ELIM_L] == ARITY[Rule.NOT_INTRO] == ARITY[Rule.EXISTS_INTRO] == 1
    assert ARITY[Rule.AXIOM] == 0


def test_one_step_chain_checks():
    d = parse_proof("(mp (instance step (num 0)) (axiom f0))", PARIKH)
    assert check_derivation(d, PARIKH)
    assert d.conclusion == Atom("F", (numeral(1),))


def test_mp_major_must_be_implication():
    d = parse_proof("(mp (axiom f0) (axiom f0))", PARIKH)
    r = check_derivation(d, PARIKH)
    assert not r and r.path == ()


def test_non_axiom_leaf_reported_with_path():
    d = parse_proof("(mp (instance step (num 1)) (axiom-formula (F (S 0))))", PARIKH)
    r = check_derivation(d, PARIKH)
    assert not r
    assert r.path == (1,)


def test_schema_instance_above_bound_rejected():
    with pytest.raises(Exception):
        parse_proof("(instance step (num 1024))", PARIKH)
    s = PARIKH.schema("step")
    assert s.match(s.instance(1023)) == (1023,)
    f = parse_formula("(=> (F (num 1024)) (F (num 1025)))")
    assert not PARIKH.is_axiom(f)


def test_schema_needs_a_bound():
    with pytest.raises(InfiniteSchema):
        Schema("s", parse_formula("(=> (F ?n) (F (S ?n)))"), None)


def test_logical_axioms_recognized():
    assert logical_axiom_kind(parse_formula("(=> A (=> B A))")) == "K"
    assert logical_axiom_kind(parse_formula("(=> (not (not A)) A)")) == "DN"
    s = "(=> (=> A (=> B C)) (=> (=> A B) (=> A C)))"
    assert logical_axiom_kind(parse_formula(s)) == "S"
    assert logical_axiom_kind(parse_formula("(=> A A)")) is None
    th = parse_theory("(axiom a A)")
    d = mp(leaf(parse_formula("(=> A (=> B A))")), leaf(Atom("A")))
    assert check_derivation(d, th)


def test_nd_assumptions_must_be_discharged():
    th = parse_theory("(axiom na (not A))")
    openp = parse_proof("(not-elim (assume u A) (axiom na))", th)
    assert not check_derivation(openp, th)
    assert check_derivation(openp, th, allow_open=True)
    closed = parse_proof("(not-intro u A (not-elim (assume u A) (axiom na)))", th)
    assert check_derivation(closed, th)


def test_mixing_calculi_rejected_at_parse_time():
    th = parse_theory("(axiom a A) (axiom ab (=> A B))")
    with pytest.raises(Exception):
        parse_proof("(and-intro (mp (axiom ab) (axiom a)) (axiom a))", th)


def test_exists_intro_checks_instance():
    th = parse_theory("(axiom p (P (S 0)))")
    ok = parse_proof("(exists-intro (exists x (P x)) (axiom p))", th)
    assert check_derivation(ok, th)
    bad = parse_proof("(exists-intro (exists x (Q x)) (axiom p))", th)
    assert not check_derivation(bad, th)


# -- credibility ------------------------------------------------------------

def test_zero_decay_gives_one():
    d = parikh_chain(50, PARIKH)
    assert credibility(FromTTP(zero_decay_ttp()), d, PARIKH) == 1


@pytest.mark.parametrize("n", [0, 1, 2, 10, 100, 1023, 1024])
def test_erosion_chain_matches_recursion(n):
    d = parikh_chain(n, PARIKH)
    got = credibility(FromTTP(erosion_ttp(E)), d, PARIKH)
    assert got == erosion_chain(E, n) == max(F(0), 1 - n * E)


def test_erosion_policy_examples():
    P = Erosion(F(1, 4))
    assert P(F(3, 4), F(1)) == F(1, 2)
    assert P(F(0), F(0)) == 0
    assert P(F(1), F(1)) == F(3, 4)


def test_factored_linear_100_at_40_symbols():
    # F(num 38) has 1 + 39 symbols
    d = leaf(Atom("F", (numeral(38),)))
    assert symbol_count(d) == 40
    m = Factored(symbol_count, Linear(100))
    assert credibility(m, d) == F(3, 5)


@given(st.integers(0, 60), st.integers(2, 3000))
def test_factored_decreases_with_chain_length(n, N):
    m = Factored(symbol_count, Linear(N))
    a = parikh_chain(n, PARIKH)
    b = parikh_chain(n + 1, PARIKH)
    ca, cb = credibility(m, a, PARIKH), credibility(m, b, PARIKH)
    assert ca == linear(N, symbol_count(a))
    assert cb < ca or cb == 0


def test_composed_measure_scores_the_normal_form():
    d = parse_proof("(and-elim-l (and-intro (axiom a) (axiom b)))", DETOUR_THEORY)
    m = Composed(normalize, Factored(node_count, Linear(4)))
    assert credibility(m, d, DETOUR_THEORY) == F(3, 4)
    assert credibility(Factored(node_count, Linear(4)), d, DETOUR_THEORY) == 0


def test_credibility_rejects_invalid_derivation():
    d = parse_proof("(mp (axiom f0) (axiom f0))", PARIKH)
    with pytest.raises(MalformedDerivation):
        credibility(FromTTP(zero_decay_ttp()), d, PARIKH)


ttps = st.sampled_from([zero_decay_ttp(), erosion_ttp(F(1, 7)), erosion_ttp(F(1, 3)), product_ttp(),
                        TTP(ZeroDecay(), ((Rule.NOT_ELIM, Erosion(F(1, 2))),))])


@given(st.integers(0, 10_000), ttps)
def test_credibility_never_increases_toward_root(seed, ttp):
    d = detour_family(1, seed=seed)[0]
    for node in d.nodes():
        c = ttp_credibility(ttp, node)
        assert all(c <= ttp_credibility(ttp, p) for p in node.premises)


def test_strong_mp_is_feasible():
    a = leaf(Atom("F", (numeral(0),)))
    ab = leaf(PARIKH.schema("step").instance(0))
    for ttp in (erosion_ttp(F(999, 1000)), product_ttp(), zero_decay_ttp()):
        assert credibility(FromTTP(ttp), mp(ab, a), PARIKH) > 0


def test_merging_barely_feasible_proofs_hits_zero():
    ttp = erosion_ttp(E)
    n = 1023
    prem = parikh_chain(n, PARIKH)
    step = leaf(PARIKH.schema("step").instance(n), f"(instance step (num {n}))")
    assert credibility(FromTTP(ttp), prem, PARIKH) == E
    assert credibility(FromTTP(ttp), step, PARIKH) == 1
    assert credibility(FromTTP(ttp), mp(step, prem), PARIKH) == 0


# -- TTP validation ---------------------------------------------------------

def test_builtin_policies_pass_grid():
    for ttp in (erosion_ttp(F(1, 4)), product_ttp(), zero_decay_ttp()):
        r = validate_ttp(ttp, 8, analytic=False)
        assert r.ok, r.violations


def test_constant_half_fails_at_origin():
    r = validate_ttp(TTP(ZeroDecay(), ((Rule.MP, Constant(F(1, 2))),)), 2)
    assert not r.ok
    v = r.violations[0]
    assert v.rule is Rule.MP and v.condition == "P(0,...,0)=0" and v.point == (0, 0)


def test_each_condition_can_be_broken():
    half = FunctionPolicy(lambda *p: F(1, 2) if max(p) > 0 else F(0), "half")
    dead = FunctionPolicy(lambda *p: F(0), "dead")
    over = FunctionPolicy(lambda *p: max(p), "max")
    conds = []
    for pol in (Constant(F(1, 2)), dead, over):
        r = validate_ttp(TTP(ZeroDecay(), ((Rule.AND_INTRO, pol),)), 16)
        assert not r.ok
        conds.append(r.violations[0].condition)
    assert conds == ["P(0,...,0)=0", "P(1,...,1)>0", "P(p)<=min(p)"]
    assert not validate_ttp(TTP(half), 4).ok


def test_invalid_erosion_factor():
    with pytest.raises(ValueError):
        Erosion(F(0))
    with pytest.raises(ValueError):
        Erosion(F(1))


def test_product_residuum():
    P = Product()
    assert P.residuum(F(1, 2), F(1, 4)) == F(1, 2)
    assert P.residuum(F(0), F(0)) == 1


# -- normalization ----------------------------------------------------------

def test_and_detour_contracts():
    d = parse_proof("(and-elim-l (and-intro (axiom a) (axiom b)))", DETOUR_THEORY)
    assert normalize(d) == parse_proof("(axiom a)", DETOUR_THEORY)


def test_normal_derivation_unchanged():
    d = parse_proof("(and-intro (axiom a) (axiom b))", DETOUR_THEORY)
    assert is_normal(d)
    assert normalize_steps(d) == [d]


def test_nested_double_detour():
    d = parse_proof("(and-elim-l (and-intro (and-elim-l (and-intro (axiom a) (axiom b))) (axiom ab)))",
                    DETOUR_THEORY)
    steps = normalize_steps(d)
    assert [s.size for s in steps] == [7, 4, 1]


def test_not_detour_substitutes_minor():
    d = parse_proof("(not-elim (axiom a) (not-intro u A (not-elim (assume u A) (axiom na))))",
                    DETOUR_THEORY)
    assert normalize(d) == parse_proof("(not-elim (axiom a) (axiom na))", DETOUR_THEORY)


def test_substitution_avoids_capture():
    th = DETOUR_THEORY
    # the minor has an open assumption v; u sits under a not-intro that also binds v
    d = parse_proof("""
      (not-elim (and-elim-l (and-intro (assume v A) (axiom b)))
                (not-intro u A
                  (not-elim (axiom b)
                            (not-intro v B
                              (not-elim (and-elim-l (and-intro (assume u A) (assume v B))) (axiom na))))))""",
                    th)
    assert check_derivation(d, th, allow_open=True)
    n = normalize(d)
    assert check_derivation(n, th, allow_open=True)
    assert {l for l, _ in open_assumptions(n)} == {"v"}


def test_normalize_hilbert_refused():
    with pytest.raises(NotNaturalDeduction):
        normalize(parikh_chain(1, PARIKH))


@given(st.integers(0, 100_000))
def test_normalization_properties(seed):
    d = detour_family(1, seed=seed)[0]
    steps = normalize_steps(d)
    n = steps[-1]
    assert n.conclusion == d.conclusion
    assert check_derivation(n, DETOUR_THEORY)
    assert is_normal(n) and normalize(n) == n
    assert all(b.size < a.size for a, b in zip(steps, steps[1:]))


def test_derivation_equality_ignores_source():
    f = Atom("A")
    assert Derivation(Rule.AXIOM, f, (), None, "x") == Derivation(Rule.AXIOM, f)
