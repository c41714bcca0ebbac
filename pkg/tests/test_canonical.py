import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitons.canonical import canonical_from_type, canonical_from_xi, check_shape, gamma_xi, type_ones
from unitons.errors import InvalidType, SizeMismatch
from unitons.exactnum import GaussianRational, RationalFunction
from unitons.lambdamat import LambdaMatrix, LambdaPoly, lmat_eval, lmat_mul

z = RationalFunction.z()
HALF = GaussianRational(1) / 2


def eq51(g):
    return LambdaMatrix([[1, -g, -HALF * g * g], [0, 1, g], [0, 0, 1]])


def test_type_examples():
    xi = canonical_from_type([1, 1, 1])
    assert xi.xi == (2, 1, 0) and xi.r == 2
    xi = canonical_from_type([1, 1, 2, 1, 1])
    assert xi.xi == (4, 3, 2, 2, 1, 0) and xi.r == 4
    with pytest.raises(InvalidType):
        canonical_from_type([1, 1])


@pytest.mark.parametrize("bad", [[], [1, 2], [0, 1, 0], [2, 1, 1, 2], [1, 1, 1, 1]])
def test_invalid_types(bad):
    with pytest.raises(InvalidType):
        canonical_from_type(bad)


def test_block_structure():
    xi = canonical_from_type([1, 2, 2, 1])
    assert xi.xi == (3, 2, 2, 1, 1, 0)
    assert [xi.T(k) for k in range(5)] == [6, 5, 3, 1, 0]
    assert list(xi.block(2)) == [2, 3]
    assert all(xi.x(i) + xi.x(xi.bar(i)) == xi.r for i in range(1, xi.n + 1))


def test_gamma_examples():
    def diag(*ks):
        n = len(ks)
        return LambdaMatrix([[LambdaPoly.monomial(ks[i]) if i == j else 0 for j in range(n)]
                             for i in range(n)])

    assert gamma_xi(canonical_from_type([1, 1, 1])) == diag(2, 1, 0)
    assert gamma_xi(canonical_from_type([5])) == LambdaMatrix.identity(5)
    assert gamma_xi(canonical_from_type([2, 2])) == diag(1, 1, 0, 0)


def test_shape_examples():
    xi = canonical_from_type([1, 1, 1])
    assert check_shape(eq51(z), xi)
    assert check_shape(LambdaMatrix.identity(3), xi)
    bad = eq51(z).replace({(1, 3): LambdaPoly({1: z})})
    rep = check_shape(bad, xi)
    assert not rep and rep.failures[0]["i"] == 1 and rep.failures[0]["j"] == 3
    # the second-diagonal bound is only a warning for complex-only matrices
    soft = check_shape(bad, xi, real=False)
    assert soft and soft.details["warnings"]
    with pytest.raises(SizeMismatch):
        check_shape(LambdaMatrix.identity(4), xi)


def test_shape_rejects_lower_entries_and_high_degree():
    xi = canonical_from_type([1, 1, 1, 1, 1])
    lower = LambdaMatrix.identity(5).replace({(3, 2): z})
    assert not check_shape(lower, xi)
    high = LambdaMatrix.identity(5).replace({(1, 3): LambdaPoly({2: z})})
    assert not check_shape(high, xi)
    negative = LambdaMatrix.identity(5).replace({(1, 2): LambdaPoly({-1: z})})
    assert not check_shape(negative, xi)


def test_type_ones_parity():
    for n in (1, 3, 5, 7, 9):
        assert type_ones(n).r == n - 1
    for n in (2, 4, 6):
        with pytest.raises(InvalidType):
            type_ones(n)


half_types = st.lists(st.integers(1, 3), min_size=1, max_size=4)


@given(half_types, st.integers(1, 4), st.booleans())
def test_type_round_trip(half, mid, odd_r):
    t = half + ([mid + 1, mid + 1] if odd_r else [mid]) + half[::-1]
    xi = canonical_from_type(t)
    assert canonical_from_xi(xi.xi) == xi
    assert sum(xi.type) == xi.n and xi.type == xi.type[::-1]
    assert all(a - b in (0, 1) for a, b in zip(xi.xi, xi.xi[1:]))


@given(half_types, st.integers(1, 3))
def test_gamma_is_a_homomorphism(half, mid):
    xi = canonical_from_type(half + [mid] + half[::-1])
    g = gamma_xi(xi)
    assert g.coefficient(0).is_lambda_free()
    sq = lmat_mul(g, g)
    for i in range(1, xi.n + 1):
        assert sq[i, i] == LambdaPoly.monomial(2 * xi.x(i))
    # based loop: gamma(1) is the identity
    assert lmat_eval(g, GaussianRational(2), GaussianRational(1)) == lmat_eval(
        LambdaMatrix.identity(xi.n), GaussianRational(2), GaussianRational(1))
