from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from unitons import gaussmat as gm
from unitons.errors import DivisionByZero
from unitons.exactnum import GaussianRational as G

from strategies import gaussian, small_gaussian

vectors = st.lists(st.lists(small_gaussian, min_size=4, max_size=4), min_size=0, max_size=4)


def test_rref_examples():
    rows = [[G(0), G(0, 2), G(2)], [G(1), G(1), G(0)]]
    basis, pivots = gm.rref(rows, 3)
    assert pivots == [0, 1]
    assert basis[1] == [G(0), G(1), G(0, -1)]
    assert gm.rank([[G(1), G(0, 1)], [G(0, 1), G(-1)]], 2) == 1
    assert gm.rref([[G(0), G(0)]], 2) == ([], [])


def test_inverse_and_singular():
    X = [[G(1), G(0, 1)], [G(2), G(3)]]
    assert gm.matmul(X, gm.inverse(X)) == gm.identity(2)
    with pytest.raises(DivisionByZero):
        gm.inverse([[G(1), G(0, 1)], [G(0, 1), G(-1)]])


def test_projector_is_hermitian_idempotent():
    v = [[G(1), G(0, 1), G(2, -1)]]
    P = gm.projector(v, 3)
    assert gm.matmul(P, P) == P and gm.adjoint(P) == P
    assert gm.projector([], 3) == gm.zeros(3)
    assert gm.projector([[G(1), G(0)], [G(0), G(5)]], 2) == gm.identity(2)


def test_flip_conj_and_second_transpose():
    X = [[G(1, 1), G(2)], [G(0, 3), G(4, -1)]]
    assert gm.flip_conj(X) == [[G(4, 1), G(0, -3)], [G(2), G(1, -1)]]
    assert gm.second_transpose(X) == [[G(4, -1), G(2)], [G(0, 3), G(1, 1)]]


@given(vectors)
@settings(max_examples=60, deadline=None)
def test_rank_nullity(rows):
    k = gm.rank(rows, 4)
    null = gm.nullspace(rows, 4) if rows else gm.identity(4)
    assert k + len(null) == 4
    for x in null:
        for r in rows:
            assert sum((a * b for a, b in zip(r, x)), G(0)) == 0


@given(vectors)
@settings(max_examples=60, deadline=None)
def test_annihilator_vanishes_on_span(rows):
    for phi in gm.annihilator(rows, 4):
        for r in rows:
            assert sum((a * b for a, b in zip(r, phi)), G(0)) == 0
    assert len(gm.annihilator(rows, 4)) == 4 - gm.rank(rows, 4)


@given(vectors, st.lists(small_gaussian, min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_span_membership(rows, coeffs):
    basis, pivots = gm.rref(rows, 4)
    combo = [sum((c * r[k] for c, r in zip(coeffs, rows)), G(0)) for k in range(4)]
    assert gm.in_span(combo, basis, pivots)
    assert gm.spans_contain(basis, [combo], 4)


@given(st.lists(st.lists(gaussian, min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_matmul_agrees_with_schoolbook(X):
    Y = gm.adjoint(X)
    expected = [[sum((X[i][k] * Y[k][j] for k in range(3)), G(0)) for j in range(3)] for i in range(3)]
    assert gm.matmul(X, Y) == expected


def test_to_complex():
    assert gm.to_complex([[G(Fraction(1, 2), 1)]]) == [[0.5 + 1j]]
    assert gm.max_abs([[G(3, 4)]]) == 5.0
