import random

from gmpy2 import mpq

import pytest

from kmint.engine import (GroupAtom, GroupWordSyntaxError, ZeroParameter,
                          apply_atom, chi_real_root, divided_power_extract,
                          h_element, inverse_word, parse_group_word,
                          plan_and_apply, weight_closure, wtilde, wtilde_i,
                          wtilde_real_root)
from kmint.hwmodule import vec_eq, vec_scale
from kmint.rootsys import NotReduced, weight_pairing


def test_chi_minus_expansion_sl2(trunc_sl2_n2):
    t = trunc_sl2_n2
    v = t.highest_weight_vector()
    out = plan_and_apply(t, (GroupAtom(-1, 0, mpq(3)),), v)
    assert out == {(0,): [mpq(1)], (1,): [mpq(3)], (2,): [mpq(9, 2)]}


def test_chi_plus_fixes_highest_weight(trunc_a2):
    t = trunc_a2
    v = t.highest_weight_vector()
    for i in range(2):
        assert plan_and_apply(t, (GroupAtom(1, i, mpq(7, 3)),), v) == v


def test_chi_plus_on_f_vector_sl2(trunc_sl2_n2):
    t = trunc_sl2_n2
    fv = plan_and_apply(t, (GroupAtom(-1, 0, mpq(1)),), t.highest_weight_vector())
    fv = {(1,): fv[(1,)]}  # just the f v_lambda component
    out = apply_atom(t, GroupAtom(1, 0, mpq(5)), fv)
    assert out == {(1,): [mpq(1)], (0,): [mpq(10)]}  # e f v = 2 v


def test_wtilde_sl2(trunc_sl2_n2):
    t = trunc_sl2_n2
    out = plan_and_apply(t, wtilde_i(0), t.highest_weight_vector())
    # the image is +-f^(2) v_lambda, a lattice basis vector
    assert list(out) == [(2,)]
    ok, cert = t.membership_VZ(out)
    assert ok and cert[(2,)][0] in (1, -1)


def test_wtilde_requires_reduced(cm_a2):
    with pytest.raises(NotReduced):
        wtilde(cm_a2, (0, 0))
    assert wtilde(cm_a2, (0, 1)) == wtilde_i(0) + wtilde_i(1)


def test_h_element_diagonal(trunc_a2):
    t = trunc_a2
    t.materialize_box(3)
    for beta in sorted(t.spaces):
        for idx in range(t.space(beta).dim):
            v = t.basis_vector(beta, idx)
            for i in range(2):
                p = weight_pairing(t.cm, t.lam.n, beta, i)
                got = plan_and_apply(t, h_element(i, mpq(5, 2)), v)
                assert vec_eq(got, vec_scale(v, mpq(5, 2) ** p))
    with pytest.raises(ZeroParameter):
        h_element(0, mpq(0))


def test_parameter_additivity(trunc_aff):
    t = trunc_aff
    rng = random.Random(7)
    t.materialize_box(3)
    spaces = [b for b in sorted(t.spaces) if t.space(b).dim]
    for _ in range(10):
        beta = rng.choice(spaces)
        v = t.basis_vector(beta, rng.randrange(t.space(beta).dim))
        i = rng.randrange(2)
        sign = rng.choice((1, -1))
        t1, t2 = mpq(rng.randint(-3, 3), rng.randint(1, 3)), mpq(1, 2)
        two = plan_and_apply(t, (GroupAtom(sign, i, t1),
                                 GroupAtom(sign, i, t2)), v)
        one = plan_and_apply(t, (GroupAtom(sign, i, t1 + t2),), v)
        assert vec_eq(two, one)


def test_inverse_law(trunc_hyp):
    t = trunc_hyp
    g = (GroupAtom(-1, 0, mpq(1, 2)), GroupAtom(1, 1, mpq(2)),
         GroupAtom(-1, 1, mpq(-1, 3)))
    v = t.highest_weight_vector()
    assert plan_and_apply(t, g + inverse_word(g), v) == v
    vv = plan_and_apply(t, g, v)
    assert plan_and_apply(t, inverse_word(g), vv) == v


def test_weight_closure_examples(trunc_sl2_n2):
    t = trunc_sl2_n2
    assert weight_closure(t, (), {(0,)}) == {(0,)}
    got = weight_closure(t, (GroupAtom(-1, 0, mpq(1)),), {(0,)})
    assert got == {(0,), (1,), (2,)}
    got = weight_closure(t, wtilde_i(0), {(0,)})
    assert got == {(0,), (1,), (2,)}


def test_chi_real_root_compilation(cm_a2, trunc_a2):
    single = chi_real_root(cm_a2, ((), 0), mpq(2))
    assert single == (GroupAtom(1, 0, mpq(2)),)
    word = chi_real_root(cm_a2, ((0,), 1), mpq(2))
    assert len(word) == 7
    v = trunc_a2.highest_weight_vector()
    assert plan_and_apply(trunc_a2, word, v) == v


def test_wtilde_real_root_and_extract(trunc_a2, cm_a2):
    t = trunc_a2
    wit = ((0,), 1)  # beta = (1,1)
    u = plan_and_apply(t, wtilde_real_root(cm_a2, wit),
                       t.highest_weight_vector())
    assert list(u) == [(2, 2)]
    # <lambda, beta^vee> = 2; the 2nd divided power climbs back to v_lambda
    out = divided_power_extract(t, wit, 2, u)
    assert list(out) == [(0, 0)] and out[(0, 0)][0] in (1, -1)
    # m = 0 is the identity coefficient
    assert divided_power_extract(t, wit, 0, u) == u


def test_extract_agrees_with_divided_power_simple(trunc_aff):
    t = trunc_aff
    t.materialize_box(3)
    v = t.basis_vector((1, 1), 0)
    got = divided_power_extract(t, ((), 0), 1, v, sign=-1)
    want = t.divided_power_act(-1, 0, 1, v)
    assert vec_eq(got, want)


def test_parse_group_word(cm_a2):
    g = parse_group_word(cm_a2, "x[+1](1/2) x[-2](-3)")
    assert g == (GroupAtom(1, 0, mpq(1, 2)), GroupAtom(-1, 1, mpq(-3)))
    assert parse_group_word(cm_a2, "wt(1 2)") == wtilde(cm_a2, (0, 1))
    assert parse_group_word(cm_a2, "h(2, 3/4)") == h_element(1, mpq(3, 4))
    assert parse_group_word(cm_a2, "xr(w=1, 2, -2/3)") == \
        chi_real_root(cm_a2, ((0,), 1), mpq(-2, 3))
    for bad in ("x[3](1)", "x[+3](1)", "frob(1)", "x[+1](1/0)", "wt(1 2"):
        with pytest.raises((GroupWordSyntaxError, ValueError)):
            parse_group_word(cm_a2, bad)
