import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopforge import terms as T
from loopforge.catalog import cyclic
from loopforge.errors import BudgetExceeded, MissingVariable, TermSyntaxError, WeightCap
from loopforge.terms import LDiv, Mul, One, RDiv, Var

x0, x1, x2, x3 = (Var(i) for i in range(4))


def brute_value(Q, t, env):
    """Oracle: recursive evaluation through the scalar loop operations."""
    if isinstance(t, Var):
        return env[t.index]
    if t == One:
        return Q.identity
    a, b = brute_value(Q, t.left, env), brute_value(Q, t.right, env)
    if isinstance(t, Mul):
        return Q.mul(a, b)
    if isinstance(t, LDiv):
        return Q.ldiv(a, b)
    return Q.rdiv(a, b)


def brute_assignments(Q, t):
    vs = sorted(t.vars())
    for vals in itertools.product(range(Q.order), repeat=len(vs)):
        yield dict(zip(vs, vals))


# -- parsing and printing ------------------------------------------------------------


def test_parse_examples():
    assert T.parse_term("(* x0 x1)") == Mul(x0, x1)
    assert T.parse_term("(\\ x0 (/ 1 x2))") == LDiv(x0, RDiv(One, x2))
    assert T.parse_term("(comm x0 x1)") == T.comm(x0, x1)
    assert T.parse_term("[x0,x1]") == T.bcomm(x0, x1)
    assert T.parse_term("[x0, x1, x2]") == T.bassoc(x0, x1, x2)
    assert T.parse_term("(* x0 x1) = (* x1 x0)") == LDiv(Mul(x0, x1), Mul(x1, x0))


@pytest.mark.parametrize(
    "text", ["", "(", "(* x0)", "(* x0 x1 x2)", "(foo x0)", "x0 x1", "[x0]", "(* x0 y)", "[x0,x1,x2,x3]"]
)
def test_parse_errors(text):
    with pytest.raises(TermSyntaxError):
        T.parse_term(text)


def test_parse_error_position():
    with pytest.raises(TermSyntaxError) as info:
        T.parse_term("(* x0 ?)")
    assert info.value.position == 6


def test_print_forms():
    t = T.alpha(x0, x1, x2)
    assert T.print_term(t, macros=True) == "(alpha x0 x1 x2)"
    assert T.print_term(T.inv(x3), macros=True) == "(inv x3)"
    assert T.print_term(Mul(x0, One)) == "(* x0 1)"
    nested = T.beta(T.comm(x0, x1), x2, T.inv(x3))
    assert T.print_term(nested, macros=True) == "(beta (comm x0 x1) x2 (inv x3))"


terms_strategy = st.integers(0, 2**32 - 1).map(lambda s: T.random_term(np.random.default_rng(s), 4, 5))


@settings(max_examples=200, deadline=None)
@given(terms_strategy, st.booleans())
def test_print_parse_round_trip(t, macros):
    assert T.parse_term(T.print_term(t, macros)) == t


# -- evaluation and identity checks ----------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(terms_strategy, st.integers(0, 2**32 - 1))
def test_evaluate_matches_recursive_oracle(t, seed):
    from loopforge.catalog import builtin_catalog

    Q = builtin_catalog()["M(S3,2)"]
    rng = np.random.default_rng(seed)
    env = {v: int(rng.integers(0, Q.order)) for v in t.vars()}
    assert T.evaluate(Q, t, env) == brute_value(Q, t, env)


def test_evaluate_examples(catalog):
    Z5 = catalog["Z5"]
    assert T.evaluate(Z5, Mul(x0, x1), [2, 4]) == 1
    assert T.evaluate(Z5, T.inv(x0), {0: 2}) == 3
    assert T.evaluate(Z5, One) == 0


def test_missing_variable(catalog):
    with pytest.raises(MissingVariable):
        T.evaluate(catalog["Z3"], Mul(x0, x2), {0: 1})


@pytest.mark.parametrize("name", ["S3", "M(S3,2)", "Z5"])
def test_holds_identity_least_witness(catalog, name):
    Q = catalog[name]
    t = T.parse_term("(* x0 x1) = (* x1 x0)")
    v = T.holds_identity(Q, t)
    brute = next((env for env in brute_assignments(Q, t) if brute_value(Q, t, env) != Q.identity), None)
    if brute is None:
        assert v.status == "holds" and v.cases == Q.order**2
    else:
        assert v.status == "fails" and v.witness == brute
        assert v.value == brute_value(Q, t, brute)


def test_holds_identity_sampled(catalog):
    O = catalog["O16"]
    t = T.bassoc(T.bassoc(x0, x1, x2), x3, Var(4))
    v = T.holds_identity(O, t, budget=1000, seed=7)
    assert v.status == "not_refuted" and v.cases == 1000 and v.seed == 7
    assert "seed 7" in v.describe() and not v.exhaustive
    w = T.holds_identity(O, T.bassoc(x0, x1, x2), budget=100, seed=3)
    assert w.status == "fails"
    assert T.evaluate(O, T.bassoc(x0, x1, x2), w.witness) == w.value != O.identity


def test_values_equal_and_budget(catalog):
    S3 = catalog["S3"]
    assert T.values_equal(S3, Mul(Mul(x0, x1), x2), Mul(x0, Mul(x1, x2))) is None
    w = T.values_equal(S3, Mul(x0, x1), Mul(x1, x0))
    assert S3.mul(w[0], w[1]) != S3.mul(w[1], w[0])
    with pytest.raises(BudgetExceeded):
        T.values_equal(S3, Mul(x0, x1), Mul(x1, x0), budget=10)


@pytest.mark.parametrize(
    "text",
    [
        "(comm x0 x1)",
        "(alpha x0 x1 x2)",
        "(bassoc (bassoc x0 x1 x2) x3 x0)",
        "(* (comm x0 x1) (bcomm x1 x2))",
    ],
)
def test_value_set_matches_brute_force(catalog, text):
    Q = catalog["M(S3,2)"]
    t = T.parse_term(text)
    brute = sorted({brute_value(Q, t, env) for env in brute_assignments(Q, t)})
    assert list(T.value_set(Q, t)) == brute


def test_value_set_with_domains(catalog):
    Z5 = catalog["Z5"]
    assert list(T.value_set(Z5, Mul(x0, x1), {0: [1], 1: [1, 2]})) == [2, 3]
    assert list(T.value_set(Z5, One)) == [0]


# -- word sets --------------------------------------------------------------------------


@pytest.mark.parametrize("kind, per_step", [("alpha_beta", 3), ("mu", 2), ("alpha", 1), ("beta", 1)])
def test_weight_word_counts(kind, per_step):
    for n in range(1, 4):
        words = T.gen_weight_words(kind, n)
        assert len(words) == per_step**n
        assert len(set(words)) == len(words)
        assert all(len(w.vars()) <= 2 * n + 1 for w in words)


def test_weight_words_with_commutators():
    assert len(T.gen_weight_words("alpha", 2, with_commutators=True)) == 4
    assert T.basis_for_class("alpha", 1)[0] == T.alpha(x0, x1, x2)


def test_basis_for_class_one():
    basis = T.basis_for_class("mu", 1)
    assert basis == [T.bassoc(x0, x1, x2), T.bcomm(x0, x1)]


def test_weight_cap_and_bad_kind():
    with pytest.raises(WeightCap):
        T.gen_weight_words("mu", T.WEIGHT_CAP + 1)
    with pytest.raises(ValueError):
        T.gen_weight_words("gamma", 1)
    with pytest.raises(ValueError):
        T.gen_weight_words("mu", 0)


# -- endomorphisms and decomposition -----------------------------------------------------


def test_delta_gamma_semantics(catalog):
    Q = catalog["M(S3,2)"]
    t = T.bassoc(x0, x1, x2)
    for env in itertools.islice(brute_assignments(Q, t), 0, 1728, 37):
        d = dict(env)
        d[1] = Q.identity
        assert T.evaluate(Q, T.delta(1, t), env) == T.evaluate(Q, t, d)
        g = T.evaluate(Q, T.gamma(1, t), env)
        assert g == Q.mul(T.evaluate(Q, t, env), Q.inverse(T.evaluate(Q, t, d)))


def test_delta_idempotent_and_commuting():
    t = T.alpha(Mul(x0, x1), x2, x3)
    assert T.delta(1, T.delta(1, t)) == T.delta(1, t)
    assert T.delta(1, T.delta(2, t)) == T.delta(2, T.delta(1, t))
    assert T.delta(5, t) == t


def test_simple_associators_and_involvement():
    inner = T.bassoc(x0, T.inv(x1), x2)
    outer = T.bassoc(inner, x3, x0)
    assert T.is_simple_associator(outer)
    assert not T.is_simple_associator(T.bassoc(Mul(x0, x1), x2, x3))
    assert not T.is_simple_associator(T.bcomm(x0, x1))
    assert T.is_simple_associator(T.alpha(x0, x1, T.beta(x1, x2, x3)), "alpha_beta")
    assert T.involves(outer, 1) and T.involves(outer, 3)
    assert not T.involves(outer, 4)
    assert T.involves(T.inv(x2), 2) and not T.involves(T.inv(x2), 1)


def test_decompose_reconstructs_exactly(catalog):
    Q = catalog["O16"]
    w = Mul(T.bassoc(x0, x1, x2), T.bcomm(x1, x0))
    d = T.decompose_5_2(w, 2)
    assert len(d.v) == 3 and len(d.corrections) == 3
    assert T.values_equal(Q, d.reconstruction(), w) is None
    for i in range(3):
        assert T.holds_identity(Q, T.delta(i, d.u)).status == "holds"


def test_decompose_rejects():
    with pytest.raises(ValueError):
        T.decompose_5_2(Mul(x0, x3), 2)
    with pytest.raises(ValueError):
        T.decompose_5_2(x0, -1)


# -- consequences on finite models -----------------------------------------------------------


def test_consequence_matrix(catalog):
    assoc = T.bassoc(x0, x1, x2)
    commut = T.bcomm(x0, x1)
    loops = [catalog["Z3"], catalog["S3"], catalog["M(S3,2)"]]
    m = T.consequence_matrix([assoc, commut], loops)
    # commutativity does not follow from associativity: S3 refutes it
    assert m[1][1].status == "refuted" and m[1][1].loop == "S3"
    # associativity does not follow from commutativity on these models
    assert m[0][0].status == "not_refuted"
    moufang = T.parse_term("(* x0 (* x1 (* x0 x2))) = (* (* (* x0 x1) x0) x2)")
    m2 = T.consequence_matrix([moufang], loops, premises=[[assoc]])
    assert m2[0][0].status == "not_refuted"


def test_consequence_matrix_skips_sampled_premises():
    Z = cyclic(4)
    long = T.bassoc(T.bassoc(x0, x1, x2), x3, Var(4))
    m = T.consequence_matrix([T.bcomm(x0, x1)], [Z], premises=[[long]], budget=100)
    assert m[0][0].status == "not_refuted" and m[0][0].skipped == ("Z4",)
