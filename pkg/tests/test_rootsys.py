import pytest
from hypothesis import given, settings, strategies as st

from kmint.rootsys import (NotRealRoot, find_word_containing_root, height,
                           inversion_set, is_reduced, prefix_roots,
                           real_roots_up_to_height, reduced_words,
                           reflect_root, simple_root, weyl_act_root)


def test_reflection_examples(cm_a2, cm_hyp):
    assert reflect_root(cm_a2, 0, (0, 1)) == (1, 1)
    assert reflect_root(cm_hyp, 0, (0, 1)) == (3, 1)
    assert reflect_root(cm_a2, 0, (1, 0)) == (-1, 0)


@given(st.integers(0, 1), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_reflection_involution(i, beta):
    from kmint.gcm import validate_gcm
    cm = validate_gcm([[2, -3], [-3, 2]])
    assert reflect_root(cm, i, reflect_root(cm, i, beta)) == beta


def test_real_roots_a2(cm_a2):
    table = real_roots_up_to_height(cm_a2, 4)
    assert set(table) == {(1, 0), (0, 1), (1, 1)}
    # canonical witnesses are reduced and reproduce the root
    for beta, (w, i) in table.items():
        assert is_reduced(cm_a2, w)
        assert weyl_act_root(cm_a2, w, simple_root(cm_a2, i)) == beta


def test_real_roots_affine(cm_aff):
    table = real_roots_up_to_height(cm_aff, 5)
    assert set(table) == {(1, 0), (0, 1), (2, 1), (1, 2), (3, 2), (2, 3)}


def test_real_roots_hyperbolic(cm_hyp):
    table = real_roots_up_to_height(cm_hyp, 4)
    assert set(table) == {(1, 0), (0, 1), (3, 1), (1, 3)}


def test_reduced_and_inversion_a2(cm_a2):
    assert is_reduced(cm_a2, (0, 1, 0))
    assert not is_reduced(cm_a2, (0, 0))
    assert not is_reduced(cm_a2, (0, 1, 0, 1))  # length 4 > longest element
    inv = inversion_set(cm_a2, (0, 1, 0))
    assert inv.roots() == [(1, 0), (1, 1), (0, 1)]
    # prefix witnesses reproduce each inversion root
    for e in inv.entries:
        assert weyl_act_root(cm_a2, e.prefix, simple_root(cm_a2, e.letter)) \
            == e.root


def test_inversion_roots_distinct_positive(cm_hyp):
    for w in reduced_words(cm_hyp, 4):
        roots = inversion_set(cm_hyp, w).roots()
        assert len(set(roots)) == len(w)
        assert all(all(x >= 0 for x in r) for r in roots)


def test_prefix_roots_match_inversion(cm_aff):
    w = (0, 1, 0)
    assert prefix_roots(cm_aff, w) == inversion_set(cm_aff, w).roots()


def test_find_word_containing_root(cm_aff):
    w = find_word_containing_root(cm_aff, (2, 1))
    assert (2, 1) in inversion_set(cm_aff, w).roots()
    with pytest.raises(NotRealRoot):
        find_word_containing_root(cm_aff, (1, 1))  # delta is imaginary


def test_reduced_words_counts(cm_a2, cm_hyp):
    # A2 has 6 nontrivial elements; rank-2 infinite groups have 2 per length
    assert len(reduced_words(cm_a2, 10)) == 6
    words = reduced_words(cm_hyp, 5)
    by_len = {}
    for w in words:
        by_len.setdefault(len(w), []).append(w)
    assert all(len(v) == 2 for v in by_len.values())


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6))
def test_witnesses_are_reduced_affine(h):
    from kmint.gcm import validate_gcm
    cm = validate_gcm([[2, -2], [-2, 2]])
    for beta, (w, i) in real_roots_up_to_height(cm, h).items():
        assert is_reduced(cm, w)
        assert height(beta) <= h
