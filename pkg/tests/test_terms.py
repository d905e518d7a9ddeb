"""Core term structure: typing, alpha, substitution, beta, matching."""

import random

import pytest

from gen import GEN_SYMBOLS, random_closed_term, random_term
from hodp.errors import InvalidPositionError, TypeCheckError
from hodp.terms import (
    App,
    Arrow,
    Base,
    Lam,
    Sym,
    Var,
    alpha_canonical,
    alpha_eq,
    apply_subst,
    arrow,
    beta_contract,
    beta_normalize,
    beta_reducts,
    binders_above,
    flatten_type,
    free_vars,
    fresh_var,
    make_app,
    match_pattern,
    positions,
    replace_at,
    show_position,
    show_term,
    show_type,
    spine,
    subterm_at,
    term_size,
    type_of,
)

N = Base("N")
L = Base("L")
NN = Arrow(N, N)

ZERO = Sym("0", N)
S = Sym("s", NN)
NIL = Sym("nil", L)
CONS = Sym("cons", Arrow(N, Arrow(L, L)))


def nat(n):
    t = ZERO
    for _ in range(n):
        t = App(S, t)
    return t


class TestTypes:
    def test_arrow_flatten_roundtrip(self):
        t = arrow((N, NN, L), N)
        assert t == Arrow(N, Arrow(NN, Arrow(L, N)))
        args, out = flatten_type(t)
        assert args == (N, NN, L)
        assert out == N

    def test_show_type_parenthesizes_left_nesting(self):
        assert show_type(Arrow(NN, N)) == "(N -> N) -> N"
        assert show_type(Arrow(N, NN)) == "N -> N -> N"
        assert show_type(N) == "N"

    def test_type_of_application(self):
        assert type_of(App(S, ZERO)) == N
        assert type_of(App(CONS, ZERO)) == Arrow(L, L)

    def test_type_of_rejects_bad_application(self):
        with pytest.raises(TypeCheckError):
            type_of(App(S, NIL))
        with pytest.raises(TypeCheckError):
            type_of(App(ZERO, ZERO))

    def test_type_of_lambda(self):
        x = Var("x", N)
        assert type_of(Lam(x, App(S, x))) == NN


class TestAlpha:
    def test_binder_names_do_not_matter(self):
        x, y = Var("x", N), Var("y", N)
        assert alpha_eq(Lam(x, x), Lam(y, y))

    def test_distinct_bindings_are_distinguished(self):
        x, y = Var("x", N), Var("y", N)
        inner_x = Lam(x, Lam(y, x))
        inner_y = Lam(x, Lam(y, y))
        assert not alpha_eq(inner_x, inner_y)

    def test_free_variables_must_agree(self):
        assert not alpha_eq(Var("a", N), Var("b", N))

    def test_canonical_form_is_stable(self):
        x, y = Var("x", N), Var("y", N)
        s = Lam(x, Lam(y, App(App(CONS, x), NIL)))
        t = Lam(y, Lam(x, App(App(CONS, y), NIL)))
        assert alpha_canonical(s) == alpha_canonical(t)

    def test_types_are_part_of_identity(self):
        assert not alpha_eq(Lam(Var("x", N), Var("x", N)), Lam(Var("x", L), Var("x", L)))


class TestFreeVarsAndSubstitution:
    def test_free_vars_stop_at_binder(self):
        x, y = Var("x", N), Var("y", N)
        t = Lam(x, App(App(S, x), y))
        assert free_vars(t) == frozenset({y})

    def test_fresh_var_avoids_taken_names(self):
        v = fresh_var("x", N, {"x", "x'"})
        assert v.name not in {"x", "x'"}

    def test_substitution_avoids_capture(self):
        x, y = Var("x", N), Var("y", N)
        t = apply_subst(Lam(y, x), {x: y})
        assert isinstance(t, Lam)
        assert t.var.name != "y"
        assert t.body == y
        assert alpha_eq(t, Lam(Var("z", N), y))

    def test_substitution_respects_shadowing(self):
        x = Var("x", N)
        t = Lam(x, x)
        assert apply_subst(t, {x: ZERO}) == t

    def test_substitution_under_binder(self):
        x, y = Var("x", N), Var("y", N)
        t = apply_subst(Lam(y, App(S, x)), {x: ZERO})
        assert alpha_eq(t, Lam(y, App(S, ZERO)))

    def test_substitution_preserves_types(self):
        rng = random.Random(11)
        for _ in range(50):
            t = random_term(rng, GEN_SYMBOLS, N, 8, env=(Var("X", N), Var("H", NN)))
            sub = {Var("X", N): nat(2), Var("H", NN): S}
            assert type_of(apply_subst(t, sub)) == N


class TestBeta:
    def test_contract_duplicating_redex(self):
        x = Var("x", N)
        dup = Lam(x, App(App(CONS, x), App(App(CONS, x), NIL)))
        t = beta_contract(App(dup, nat(1)))
        assert t == App(App(CONS, nat(1)), App(App(CONS, nat(1)), NIL))

    def test_reducts_lists_each_redex_once(self):
        x = Var("x", N)
        idn = Lam(x, x)
        t = App(App(CONS, App(idn, ZERO)), App(App(CONS, App(idn, ZERO)), NIL))
        reducts = beta_reducts(t)
        assert len(reducts) == 2
        for pos, r in reducts:
            assert type_of(r) == L
            assert r != t

    def test_normalize_reaches_a_normal_form(self):
        x = Var("x", N)
        f = Var("f", NN)
        t = App(App(Lam(f, Lam(x, App(f, App(f, x)))), S), ZERO)
        assert beta_normalize(t) == nat(2)

    def test_normalize_is_idempotent_on_random_terms(self):
        rng = random.Random(23)
        for _ in range(40):
            t = random_closed_term(rng, size_cap=16)
            n = beta_normalize(t)
            assert beta_normalize(n) == n


class TestPositions:
    def test_show_position(self):
        assert show_position(()) == "ε"
        assert show_position((2, 1)) == "2.1"

    def test_positions_are_preorder(self):
        t = App(App(CONS, ZERO), NIL)
        ps = [p for p, _ in positions(t)]
        assert ps == sorted(ps)
        assert ps[0] == ()

    def test_subterm_and_replace_roundtrip(self):
        rng = random.Random(7)
        for _ in range(60):
            t = random_closed_term(rng, size_cap=14)
            for pos, sub in positions(t):
                assert subterm_at(t, pos) == sub
                assert replace_at(t, pos, sub) == t

    def test_replace_changes_exactly_one_spot(self):
        t = App(App(CONS, ZERO), NIL)
        assert replace_at(t, (1, 2), nat(1)) == App(App(CONS, nat(1)), NIL)

    def test_invalid_position_raises(self):
        with pytest.raises(InvalidPositionError):
            subterm_at(ZERO, (1,))

    def test_binders_above_reports_depths(self):
        x, y = Var("x", N), Var("y", NN)
        t = Lam(y, Lam(x, App(y, x)))
        above = binders_above(t, (1, 1, 2))
        assert above == {0: y, 1: x}
        assert binders_above(t, ()) == {}


class TestSpine:
    def test_spine_decomposition(self):
        t = App(App(CONS, ZERO), NIL)
        head, args = spine(t)
        assert head == CONS
        assert args == (ZERO, NIL)
        assert make_app(head, args) == t

    def test_lambda_heads_are_opaque(self):
        x = Var("x", N)
        t = App(Lam(x, x), ZERO)
        head, args = spine(t)
        assert head == Lam(x, x)
        assert args == (ZERO,)

    def test_term_size_counts_nodes(self):
        assert term_size(ZERO) == 1
        assert term_size(nat(2)) == 5
        assert term_size(Lam(Var("x", N), Var("x", N))) == 2


class TestMatching:
    def test_first_order_match(self):
        f, l = Var("F", NN), Var("Ls", L)
        x = Var("X", N)
        pattern = App(App(CONS, x), l)
        subject = App(App(CONS, nat(1)), NIL)
        sub = match_pattern(pattern, subject)
        assert sub == {x: nat(1), l: NIL}

    def test_match_is_a_real_substitution(self):
        rng = random.Random(31)
        x, l = Var("X", N), Var("Ls", L)
        pattern = App(App(CONS, x), l)
        for _ in range(30):
            inst = apply_subst(
                pattern,
                {x: random_term(rng, GEN_SYMBOLS, N, 5), l: random_term(rng, GEN_SYMBOLS, L, 5)},
            )
            sub = match_pattern(pattern, inst)
            assert sub is not None
            assert apply_subst(pattern, sub) == inst

    def test_repeated_variables_must_agree(self):
        x = Var("X", N)
        pattern = App(App(CONS, x), App(App(CONS, x), NIL))
        good = App(App(CONS, nat(1)), App(App(CONS, nat(1)), NIL))
        bad = App(App(CONS, nat(1)), App(App(CONS, nat(2)), NIL))
        assert match_pattern(pattern, good) == {x: nat(1)}
        assert match_pattern(pattern, bad) is None

    def test_repeated_variables_compare_modulo_alpha(self):
        f = Var("F", NN)
        g = Sym("g", Arrow(NN, Arrow(NN, N)))
        pattern = App(App(g, f), f)
        a = Lam(Var("x", N), Var("x", N))
        b = Lam(Var("y", N), Var("y", N))
        assert match_pattern(pattern, App(App(g, a), b)) is not None

    def test_match_respects_types(self):
        x = Var("X", N)
        assert match_pattern(x, NIL) is None
        assert match_pattern(x, ZERO) == {x: ZERO}

    def test_symbols_match_only_themselves(self):
        assert match_pattern(ZERO, ZERO) == {}
        assert match_pattern(ZERO, NIL) is None

    def test_no_match_for_bound_variable_escape(self):
        # a pattern variable under a binder cannot grab the bound variable
        x = Var("X", N)
        y = Var("y", N)
        pattern = Lam(y, App(S, x))
        subject = Lam(y, App(S, y))
        assert match_pattern(pattern, subject) is None

    def test_match_under_binder_binds_outside_values(self):
        x = Var("X", N)
        y = Var("y", N)
        pattern = Lam(y, App(S, x))
        subject = Lam(y, App(S, nat(1)))
        assert match_pattern(pattern, subject) == {x: nat(1)}

    def test_binder_types_must_match(self):
        p = Lam(Var("y", N), Var("X", N))
        s = Lam(Var("y", L), Var("X2", N))
        assert match_pattern(p, s) is None


class TestGeneratedTermsAreWellTyped:
    def test_generator_contract(self):
        rng = random.Random(2)
        for _ in range(100):
            t = random_closed_term(rng)
            assert term_size(t) <= 20
            assert free_vars(t) == frozenset()
            assert isinstance(type_of(t), Base)
