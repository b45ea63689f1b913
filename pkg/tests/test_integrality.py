from gmpy2 import mpq

import pytest

from kmint.engine import plan_and_apply, wtilde
from kmint.hwmodule import vec_eq
from kmint.integrality import (ExperimentConfig, PairNotCommuting,
                               PreconditionFailed, RankNotTwo,
                               base_case_experiment, check_commutator_identity,
                               check_hwtstab, check_Lxx, commuting_experiment,
                               compile_inversion_word, inversion_experiment,
                               rank2_omega, scan, telescoped_uw_wtilde,
                               uniqueness_probe)
from kmint.rootsys import inversion_set, real_roots_up_to_height


def box(depth):
    return [(a, b) for a in range(depth + 1) for b in range(depth + 1)
            if a + b <= depth]


def test_Lxx_sl2(trunc_sl2_n2):
    assert check_Lxx(trunc_sl2_n2, ((), 0), (0,))


def test_Lxx_a2_nonsimple(trunc_a2):
    assert check_Lxx(trunc_a2, ((0,), 1), (0, 0))


def test_Lxx_precondition(trunc_a2):
    with pytest.raises(PreconditionFailed):
        check_Lxx(trunc_a2, ((), 0), (1, 0))  # pairing <= 0 there
    trunc_a2.materialize((1, 1))
    with pytest.raises(PreconditionFailed):
        check_Lxx(trunc_a2, ((), 1), (1, 1))  # mu + alpha_2 is a weight


def test_commutator_identity(trunc_a2, trunc_aff):
    assert check_commutator_identity(trunc_a2, 0, 1, box(2))
    assert check_commutator_identity(trunc_a2, 0, 3, box(2))
    assert check_commutator_identity(trunc_aff, 1, 2, box(2))


def test_hwtstab(trunc_a2, cm_a2):
    from kmint.engine import parse_group_word
    assert check_hwtstab(trunc_a2, ())
    assert check_hwtstab(trunc_a2, parse_group_word(cm_a2, "x[+1](5/3)"))
    g = parse_group_word(cm_a2, "x[+1](1/2) xr(w=1, 2, -3) x[+2](2)")
    assert check_hwtstab(trunc_a2, g)


def test_base_case_sl2(trunc_sl2_n2):
    r = base_case_experiment(trunc_sl2_n2, ((), 0), mpq(1, 2))
    assert not r.member and r.agree
    r = base_case_experiment(trunc_sl2_n2, ((), 0), mpq(3))
    assert r.member and r.agree


def test_base_case_a2_highest_root(trunc_a2):
    r = base_case_experiment(trunc_a2, ((0,), 1), mpq(2, 3))
    assert not r.member and r.agree


def test_telescoping_matches_conjugated_product(trunc_a2, cm_a2):
    # the cancelled form and the literal product of conjugated factors
    # are the same operator
    params = (mpq(1, 2), mpq(-1), mpq(3))
    word = (0, 1, 0)
    lhs = plan_and_apply(trunc_a2,
                         telescoped_uw_wtilde(cm_a2, word, params),
                         trunc_a2.highest_weight_vector())
    base = plan_and_apply(trunc_a2, wtilde(cm_a2, word),
                          trunc_a2.highest_weight_vector())
    rhs = plan_and_apply(trunc_a2,
                         compile_inversion_word(cm_a2, word, params), base)
    assert vec_eq(lhs, rhs)


def test_inversion_experiment_a2(trunc_a2, cm_a2):
    lam = trunc_a2.lam
    r = inversion_experiment(trunc_a2, ExperimentConfig(
        cm_a2, lam, (0, 1, 0), (mpq(1), mpq(-2), mpq(3))))
    assert r.member and r.agree
    r = inversion_experiment(trunc_a2, ExperimentConfig(
        cm_a2, lam, (0, 1, 0), (mpq(1, 2), mpq(1), mpq(1))))
    assert not r.member and r.agree


def test_inversion_experiment_hyperbolic(trunc_hyp, cm_hyp):
    lam = trunc_hyp.lam
    r = inversion_experiment(trunc_hyp, ExperimentConfig(
        cm_hyp, lam, (0, 1), (mpq(1), mpq(5, 2))))
    assert not r.member and r.agree


def test_uniqueness_probe(trunc_a2, trunc_hyp):
    tuples = [(mpq(0), mpq(1)), (mpq(1), mpq(0)), (mpq(1), mpq(1))]
    assert uniqueness_probe(trunc_a2, (0, 1), tuples)
    assert uniqueness_probe(trunc_hyp, (1, 0), tuples)
    with pytest.raises(PreconditionFailed):
        uniqueness_probe(trunc_a2, (0, 1), [tuples[0], tuples[0]])


def test_commuting_pair_detection(trunc_a2, trunc_aff, cm_aff):
    # alpha_1, alpha_2 never commute; alpha_1 and the highest root of A2 do
    with pytest.raises(PairNotCommuting):
        commuting_experiment(trunc_a2, [((), 0), ((), 1)],
                             [mpq(1), mpq(1)], box(2))
    r = commuting_experiment(trunc_a2, [((), 0), ((0,), 1)],
                             [mpq(1), mpq(2)], box(2))
    assert r.member and r.agree
    # affine: (1,0) and (1,2) sum to 2*delta, a root, so they do not commute
    roots = real_roots_up_to_height(cm_aff, 3)
    with pytest.raises(PairNotCommuting):
        commuting_experiment(trunc_aff, [((), 0), roots[(1, 2)]],
                             [mpq(1), mpq(1)], box(4))


def test_commuting_branch_family_affine(trunc_aff, cm_aff):
    # (1,0) and (2,1): sum (3,1) is not a root, the subgroups commute
    roots = real_roots_up_to_height(cm_aff, 3)
    r = commuting_experiment(trunc_aff, [((), 0), roots[(2, 1)]],
                             [mpq(1, 2), mpq(1)], box(4))
    assert not r.member and r.agree
    r = commuting_experiment(trunc_aff, [((), 0), roots[(2, 1)]],
                             [mpq(2), mpq(-1)], box(4))
    assert r.member and r.agree


def test_rank2_omega(cm_a2, cm_aff, cm_hyp, cm_sl2):
    assert rank2_omega(cm_aff, 1, 3) == [(1, 0), (2, 1), (3, 2)]
    assert rank2_omega(cm_hyp, 1, 2) == [(1, 0), (3, 1)]
    assert rank2_omega(cm_a2, 2, 1) == [(0, 1)]
    with pytest.raises(RankNotTwo):
        rank2_omega(cm_sl2, 1, 1)


def test_rank2_omega_prefixes_are_inversion_sets(cm_aff, cm_hyp):
    for cm in (cm_aff, cm_hyp):
        for side in (1, 2):
            om = rank2_omega(cm, side, 6)
            word = []
            letter = side - 1
            for k in range(1, 7):
                word.append(letter)
                letter = 1 - letter
                inv = inversion_set(cm, tuple(word)).roots()
                assert inv == om[:k]


def test_scan_statuses(trunc_a2, cm_a2):
    cells = scan(cm_a2, trunc_a2.lam, [(0,), (0, 1)],
                 [(mpq(2),), (mpq(1, 2),), (mpq(1), mpq(1)),
                  (mpq(1), mpq(1, 3))], trunc=trunc_a2)
    assert len(cells) == 4
    assert all(c["status"] == "ok" for c in cells)
    assert all(c["agree"] for c in cells)
    members = [c["member"] for c in cells]
    assert members == [True, False, True, False]
    assert scan(cm_a2, trunc_a2.lam, [], [], trunc=trunc_a2) == []
