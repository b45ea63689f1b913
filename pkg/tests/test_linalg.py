from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from kmint.linalg import (RationalLattice, SingularMatrix, det, hnf_columns,
                          leading_principal_minors, psd_kernel_dim, solve)

import pytest


def M(rows):
    return [[mpq(x) for x in r] for r in rows]


def test_det_and_minors():
    a = M([[2, -1], [-1, 2]])
    assert det(a) == 3
    assert leading_principal_minors(a) == [2, 3]


def test_solve_simple():
    a = M([[2, 1], [1, 3]])
    x = solve(a, [mpq(5), mpq(10)])
    assert x == [mpq(1), mpq(3)]
    with pytest.raises(SingularMatrix):
        solve(M([[1, 2], [2, 4]]), [mpq(1), mpq(1)])


def test_psd_kernel():
    ok, k = psd_kernel_dim(M([[2, -2], [-2, 2]]))
    assert ok and k == 1
    ok, k = psd_kernel_dim(M([[2, -3], [-3, 2]]))
    assert not ok
    ok, k = psd_kernel_dim(M([[2, -1], [-1, 2]]))
    assert ok and k == 0


def test_hnf_canonical_form():
    cols = [[mpq(2), mpq(0)], [mpq(3), mpq(3)], [mpq(0), mpq(6)]]
    h = hnf_columns(cols, 2)
    # basis (1,3),(0,6): pivots positive, non-pivot entries in [0, pivot)
    assert h == [[mpq(1), mpq(3)], [mpq(0), mpq(6)]]


def test_lattice_membership_certificate():
    lat = RationalLattice(2, [[mpq(1, 2), mpq(0)], [mpq(0), mpq(1)],
                              [mpq(1, 2), mpq(1)]])
    assert lat.contains([mpq(3, 2), mpq(2)])
    assert not lat.contains([mpq(1, 3), mpq(0)])
    sol = lat.solve([mpq(1, 2), mpq(5)])
    assert sol is not None and all(s.denominator == 1 for s in sol)


def test_lattice_rank_deficient():
    lat = RationalLattice(2, [[mpq(1), mpq(1)], [mpq(2), mpq(2)]])
    assert lat.rank == 1
    assert lat.contains([mpq(3), mpq(3)])
    assert lat.solve([mpq(1), mpq(0)]) is None


small_rat = st.fractions(min_value=-3, max_value=3, max_denominator=4).map(
    lambda f: mpq(f.numerator, f.denominator))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(small_rat, min_size=2, max_size=2),
                min_size=1, max_size=4))
def test_hnf_idempotent_and_spans(cols):
    h1 = hnf_columns(cols, 2)
    h2 = hnf_columns(h1, 2)
    assert h1 == h2
    # every original generator is an integral combination of the HNF basis
    lat = RationalLattice(2, cols)
    for c in cols:
        assert lat.contains(c)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(small_rat, min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_solve_roundtrip(rows):
    a = rows
    if det([list(r) for r in a]) == 0:
        return
    rhs = [mpq(1), mpq(-2), mpq(1, 3)]
    x = solve([list(r) for r in a], rhs)
    got = [sum(a[r][c] * x[c] for c in range(3)) for r in range(3)]
    assert got == rhs
