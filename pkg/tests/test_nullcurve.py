import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from unitons.errors import DegenerateCurve, DegenerateData, NotFull, NotIsotropic, TypeMismatch
from unitons.exactnum import GaussianRational as G, RationalFunction, parse_rf
from unitons.lambdamat import LambdaMatrix
from unitons.nullcurve import (
    NullCurve,
    WeierstrassData,
    calabi_reconstruct,
    curve_to_matrix,
    is_full,
    isotropy_check,
    isotropy_order,
    last_column_curve,
    matrix_to_curve,
    matrix_to_data,
    null_quadratic,
    weierstrass,
    weierstrass_c3,
    weierstrass_c4,
)
from unitons.solver import build_low_dim, build_type_ones, verify_candidate

from helpers import random_mu, random_nonconstant, random_rf, rng_for

z = RationalFunction.z()
HALF = RationalFunction.const(1) / 2


def P(text):
    return parse_rf(text)


def test_c3_example():
    chi = weierstrass_c3(WeierstrassData.c3(z, z**3))
    assert chi.components == (6 * z, 3 * z**2, -(z**3))
    d = chi.derivative()
    assert 2 * d[0] * d[2] + d[1] * d[1] == 0
    assert chi.nullity() == 0 and chi.is_null()


def test_c3_degenerate():
    with pytest.raises(DegenerateData):
        weierstrass_c3(WeierstrassData.c3(P("3"), z**3))
    # nu = g^2 / 2 makes nu^(2) constant, so [chi'] would be constant
    g = P("z^2 + z")
    with pytest.raises(DegenerateData):
        weierstrass_c3(WeierstrassData.c3(g, HALF * g * g))


def test_c4_example():
    chi = weierstrass_c4(WeierstrassData.c4(z, z**2, z**3))
    assert chi.components == (2 * z, z**2, 3 * z**2, -2 * z**3)
    d = chi.derivative()
    assert 2 * (d[0] * d[3] + d[1] * d[2]) == 0


def test_c4_degenerate_and_slice():
    with pytest.raises(DegenerateData):
        weierstrass_c4(WeierstrassData.c4(P("i"), z**2, z))
    chi = weierstrass_c4(WeierstrassData.c4(z, z**2, 0))
    assert chi.components[2:] == (0, 0) and chi.is_null()


def test_curve_to_matrix_round_trip_c3():
    data = WeierstrassData.c3(z, z**3)
    cand = curve_to_matrix(weierstrass(data))
    assert cand.A == build_low_dim((1, 1, 1, 1, 1), {"g": z, "nu1": z**3}).A
    assert matrix_to_data(cand) == data
    assert all(verify_candidate(cand))


def test_curve_to_matrix_c4_passes_solver():
    data = WeierstrassData.c4(z, z**2, z**3)
    chi = weierstrass(data)
    cand = curve_to_matrix(chi)
    assert all(verify_candidate(cand))
    assert matrix_to_curve(cand) == chi
    assert [cand.A[i, 6].coeff(0) for i in (5, 4, 3, 2)] == list(chi.components)
    assert cand.A == build_low_dim((1, 1, 2, 1, 1), {"g1": z, "h1": z**2, "h2": z**3}).A
    assert matrix_to_data(cand) == data


def test_degenerate_curves():
    with pytest.raises(DegenerateCurve):
        curve_to_matrix(NullCurve(3, (P("1"), z, P("-1/2*z^2"))))
    # a line: null but [chi'] constant
    with pytest.raises(DegenerateCurve):
        curve_to_matrix(NullCurve(3, (z, 0, 0)))
    with pytest.raises(DegenerateCurve):
        curve_to_matrix(NullCurve(3, (z, z, z)))
    with pytest.raises(TypeMismatch):
        NullCurve(5, (z,) * 5)


def test_matrix_to_data_type_errors():
    with pytest.raises(TypeMismatch):
        matrix_to_data(build_low_dim((1, 1, 1), {"g": z}))
    lam = build_low_dim((1, 1, 1, 1, 1), {"g": z, "nu1": z**3, "nu2": z})
    with pytest.raises(TypeMismatch):
        matrix_to_data(lam)


def test_readout_from_displayed_matrices():
    g, nu = P("z^2"), P("z^5 + i")
    A = build_low_dim((1, 1, 1, 1, 1), {"g": g, "nu1": nu})
    assert matrix_to_data(A) == WeierstrassData.c3(g, nu)
    c = build_low_dim((1, 1, 2, 1, 1), {"g1": z, "h1": P("z^3"), "h2": P("z^4 - z")})
    d = matrix_to_data(c)
    a = lambda i, j: c.A[i, j].coeff(0)  # noqa: E731
    assert d["h2"] == a(1, 3) * a(3, 5) - a(1, 5) == P("z^4 - z")


def test_middle_of_five_ones_last_column_is_null():
    c = build_low_dim((1, 1, 1, 1, 1), {"g": P("z^2 + 1"), "nu1": P("1/z + z^4")})
    mid = [c.A[i, 5].coeff(0) for i in (4, 3, 2)]
    assert null_quadratic([m.derivative() for m in mid]) == 0


def test_null_squared_form():
    # 2 chi1' chi3' + (chi2')^2 vanishes; the unsquared variant does not
    chi = weierstrass_c3(WeierstrassData.c3(z, z**3))
    d = chi.derivative()
    assert d[0] * d[2] == -HALF * d[1] * d[1]
    assert d[0] * d[2] != -HALF * d[1]


# -- randomized bijections ---------------------------------------------------------


@pytest.mark.parametrize("seed", range(8))
def test_c3_bijection(seed):
    rng = rng_for("c3", seed)
    while True:
        g, nu = random_nonconstant(rng, 3), random_rf(rng, 5)
        try:
            chi = weierstrass_c3(WeierstrassData.c3(g, nu))
            cand = curve_to_matrix(chi)
        except (DegenerateData, DegenerateCurve):
            continue
        break
    assert chi.nullity() == 0
    assert matrix_to_data(cand) == WeierstrassData.c3(g, nu)
    assert matrix_to_curve(cand) == chi
    assert curve_to_matrix(matrix_to_curve(cand)).A == cand.A


@pytest.mark.parametrize("seed", range(8))
def test_c4_bijection(seed):
    rng = rng_for("c4", seed)
    while True:
        g1, h1, h2 = random_nonconstant(rng, 3), random_rf(rng, 4), random_rf(rng, 4)
        try:
            chi = weierstrass_c4(WeierstrassData.c4(g1, h1, h2))
            cand = curve_to_matrix(chi)
        except (DegenerateData, DegenerateCurve):
            continue
        break
    assert chi.nullity() == 0
    assert matrix_to_data(cand) == WeierstrassData.c4(g1, h1, h2)
    assert curve_to_matrix(matrix_to_curve(cand)).A == cand.A
    assert all(verify_candidate(cand))


def test_json_round_trip():
    d = WeierstrassData.c4(z, P("z^2/(z - i)"), P("3"))
    assert WeierstrassData.from_json(d.to_json()) == d
    chi = weierstrass(d)
    assert NullCurve.from_json(chi.to_json()) == chi


# -- isotropy and Calabi ------------------------------------------------------------


def test_isotropy_examples():
    c = build_type_ones([z, P("z^3 + z")])
    F = last_column_curve(c)
    assert isotropy_check(F, 3)
    assert isotropy_order(F) == 3
    assert isotropy_check([1, 0, 0, 0, 0], 1)
    assert not isotropy_check([1, 0, 0, 0, 1], 1)
    with pytest.raises(ValueError):
        isotropy_check([0, 0, 0], 1)


def test_ordinary_and_generalized_derivatives_agree_at_points():
    # F' = a'_{12} * F^(1) for the last column of the three-by-three solution
    g = P("z^2 - 2*z")
    c = build_type_ones([-g])
    F = last_column_curve(c)
    for z0 in (G(1, 1), G(3), G(-1, 2)):
        for f in F:
            gen = f.derivative() / g.derivative()
            assert f.derivative()(z0) == g.derivative()(z0) * gen(z0)


def test_calabi_three():
    g = P("z^3 + i*z")
    cand = calabi_reconstruct([1, g, -HALF * g * g])
    assert cand.A == build_type_ones([-g]).A


@pytest.mark.parametrize("m", [1, 2, 3])
def test_calabi_round_trip(m):
    rng = rng_for("calabi", m)
    mu, c = random_mu(rng, m, strict=True)
    F = last_column_curve(c)
    assert isotropy_check(F, 2 * m - 1)
    assert is_full(F)
    back = calabi_reconstruct(F)
    assert back.A == c.A


def test_calabi_errors():
    with pytest.raises(NotIsotropic):
        calabi_reconstruct([1, z, z])
    with pytest.raises(TypeMismatch):
        calabi_reconstruct([1, z, z, z])
    with pytest.raises(NotFull):
        calabi_reconstruct([1, 0, 0])
    with pytest.raises(NotFull):
        calabi_reconstruct([0, z, 1])


def test_fullness():
    assert is_full([1, z, -HALF * z * z])
    assert not is_full([1, z, z])
    # every sample point at a pole still falls back to exact elimination
    assert is_full([1, 1 / (z - 3 - G(0, 1)), z**2], samples=(G(3, 1),))


@given(st.integers(min_value=1, max_value=4))
@settings(max_examples=4, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_calabi_chain_property(k):
    mu, c = random_mu(rng_for("chain", k), 2, strict=True)
    F = last_column_curve(c)
    assert isotropy_order(F) == 3
    assert calabi_reconstruct(F).A == c.A
