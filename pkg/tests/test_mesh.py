import numpy as np
import pytest

from unitons.errors import EmptyGrid
from unitons.exactnum import RationalFunction, parse_rf
from unitons.mesh import euclidean_frame, evaluate_curve, sample_mesh, surface_residuals
from unitons.nullcurve import WeierstrassData, weierstrass

z = RationalFunction.z()


def c3_fixture():
    return weierstrass(WeierstrassData.c3(z, z**3)).components


def rational_fixture():
    # pole at 3 keeps the stencil error nonzero, so convergence is visible
    return weierstrass(WeierstrassData.c3(z, 1 / (z - 3))).components


def test_frame_is_unitary_and_diagonalizes_the_form():
    for n in (3, 4, 5):
        U = euclidean_frame(n)
        assert np.allclose(U.conj().T @ U, np.eye(n))
        J = np.eye(n)[::-1]
        # null-basis form J pulled back from the standard dot product
        assert np.allclose(U.T @ U, J)


def test_curve_is_conformal_in_euclidean_coordinates():
    chi = c3_fixture()
    Z = np.array([0.3 + 0.2j, -0.5 + 0.1j])
    h = 1e-6
    d = (evaluate_curve(chi, Z + h) - evaluate_curve(chi, Z - h)) / (2 * h)
    U = euclidean_frame(3)
    dE = d @ U.T
    assert np.allclose(np.sum(dE * dE, axis=-1), 0, atol=1e-6)


def test_sample_counts_and_faces():
    m = sample_mesh(c3_fixture(), resolution=8)
    assert m.vertices.shape == (64, 3)
    assert len(m.faces) == 49
    assert m.faces[0] == (1, 2, 10, 9)
    assert all(1 <= k <= 64 for f in m.faces for k in f)
    assert np.all(np.isfinite(m.vertices))


def test_obj_and_csv_text():
    m = sample_mesh(c3_fixture(), resolution=4)
    lines = m.obj_text().splitlines()
    assert sum(1 for s in lines if s.startswith("v ")) == 16
    faces = [s for s in lines if s.startswith("f ")]
    assert len(faces) == 9 and faces[0] == "f 1 2 6 5"
    csv = m.csv_text().splitlines()
    assert csv[0] == "x1,x2,x3" and len(csv) == 17
    m4 = sample_mesh(weierstrass(WeierstrassData.c4(z, z**2, z**3)).components, resolution=4)
    assert m4.csv_text().splitlines()[0] == "x1,x2,x3,x4"
    assert all(len(s.split()) == 4 for s in m4.obj_text().splitlines() if s.startswith("v "))


def test_translation_invariance():
    chi = c3_fixture()
    shifted = [c + parse_rf(s) for c, s in zip(chi, ("1 + i", "-2", "3*i"))]
    a = sample_mesh(chi, resolution=16).metadata
    b = sample_mesh(shifted, resolution=16).metadata
    for key in ("conformality_stretch", "conformality_shear", "laplacian"):
        assert a[key]["max"] == pytest.approx(b[key]["max"], rel=1e-6, abs=1e-12)


def test_pole_filtering():
    chi = rational_fixture()
    m = sample_mesh(chi, bounds=(2, 4, -1, 1), resolution=5)
    assert m.metadata["filtered_samples"] == 1
    assert m.vertices.shape[0] == 24
    assert len(m.faces) == 12
    with pytest.raises(EmptyGrid):
        sample_mesh(chi, bounds=(3, 3, 0, 0), resolution=3)
    with pytest.raises(ValueError):
        sample_mesh(chi, resolution=2)


def test_residuals_of_exact_plane():
    xs = np.linspace(0, 1, 5)
    X, Y = np.meshgrid(xs, xs)
    S = np.stack([X, Y, 0 * X], axis=-1)
    stretch, shear, lap = surface_residuals(S, 0.25, 0.25)
    assert np.allclose(stretch, 0) and np.allclose(shear, 0)
    assert np.all(np.isnan(lap))  # no curvature to compare against


def test_second_order_convergence():
    chi = rational_fixture()
    bounds = (-1, 1, -1, 1)
    coarse = sample_mesh(chi, bounds, 64).metadata
    fine = sample_mesh(chi, bounds, 128).metadata
    for key in ("conformality_stretch", "laplacian"):
        ratio = coarse[key]["max"] / fine[key]["max"]
        assert 3.5 < ratio < 4.5, (key, ratio)


def test_polynomial_fixture_laplacian_is_exact():
    # cubic components are reproduced exactly by the five-point stencil
    meta = sample_mesh(c3_fixture(), resolution=64).metadata
    assert meta["laplacian"]["max"] < 1e-10
