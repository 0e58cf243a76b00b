import math

import numpy as np
import pytest

from src.campaigns.roundtrip import random_form
from src.errors import DegreeError, DimensionError
from src.geometry.acs import standard_structure
from src.geometry.exterior import (
    bidegree_of,
    cohomology_class,
    contract,
    evaluate,
    ext_d,
    hodge_components,
    integrate,
    matrix_at,
    power,
    restrict,
    wedge,
)
from src.models.form import Form, VectorField
from src.models.fourier import FourierScalar

DIM = 4


def omega():
    return wedge(Form.dz(DIM, 0), Form.dz(DIM, 1))


def eta():
    return wedge(Form.dz(DIM, 1), Form.dzbar(DIM, 1)) * 0.5j


def test_wedge_repeated_factor_vanishes():
    assert wedge(omega(), omega()).is_zero()
    assert power(omega(), 2).is_zero()


def test_wedge_of_coordinate_forms():
    top = wedge(Form.basis(DIM, (0, 1)), Form.basis(DIM, (2, 3)))
    assert top.degree == 4
    assert top.coefficient((0, 1, 2, 3)).constant_term() == 1
    assert integrate(top) == 1


def test_wedge_is_graded_commutative():
    a, b = Form.dx(DIM, 0), Form.dx(DIM, 2)
    assert wedge(a, b) == -wedge(b, a)


def test_omega_wedge_eta_vanishes():
    assert wedge(omega(), eta()).is_zero()


def test_eta_is_real_coordinate_form():
    assert eta().max_difference(Form.basis(DIM, (2, 3))) == 0


def test_wedge_dimension_mismatch():
    with pytest.raises(DimensionError):
        wedge(Form.dx(4, 0), Form.dx(8, 0))


def test_contract_with_antiholomorphic_vector():
    assert contract(omega(), VectorField.d_dzbar(DIM, 0)).is_zero()


def test_contract_with_holomorphic_vector():
    result = contract(omega(), VectorField.d_dz(DIM, 0))
    assert result.max_difference(Form.dz(DIM, 1)) < 1e-15


@pytest.mark.parametrize("t", [1, 2, 1j, 5 - 5j])
def test_kernel_vector_of_family_member(t):
    omega_t = omega() + eta() * t
    vector = VectorField.d_dzbar(DIM, 1) + VectorField.d_dz(DIM, 0) * (0.5j * t)
    assert contract(omega_t, vector).max_abs < 1e-14


def test_contract_function_raises():
    with pytest.raises(DegreeError):
        contract(Form.constant(DIM, 1.0), VectorField.d_dx(DIM, 0))


def test_d_of_constant_form():
    assert ext_d(omega()).is_zero()


def test_d_of_trigonometric_coefficient():
    form = Form.basis(DIM, (1,), FourierScalar.sin(DIM, 0))
    expected = Form.basis(DIM, (0, 1), FourierScalar.cos(DIM, 0, amplitude=2 * math.pi))
    assert ext_d(form).max_difference(expected) < 1e-12


def test_d_squared_vanishes():
    f = FourierScalar.sin(DIM, 0) * FourierScalar.cos(DIM, 2, k=2)
    form = Form.basis(DIM, (1,), f) + Form.basis(DIM, (3,), FourierScalar.cos(DIM, 1))
    assert ext_d(ext_d(form)).max_abs < 1e-10


def test_holomorphic_symplectic_form_is_20():
    assert bidegree_of(omega(), standard_structure(DIM)) == [(2, 0)]


def test_base_area_form_is_11():
    assert bidegree_of(Form.basis(DIM, (2, 3)), standard_structure(DIM)) == [(1, 1)]


def test_hodge_components_sum_to_form():
    form = Form.basis(DIM, (0, 2)) + Form.basis(DIM, (1, 3), 2.0)
    components = hodge_components(form, standard_structure(DIM))
    total = Form.zero(DIM, 2)
    for part in components.values():
        total = total + part
    assert total.max_difference(form) < 1e-12


def test_matrix_and_evaluate_agree():
    u = np.array([0.5, -0.5j, 0, 0])
    v = np.array([0, 0, 0.5, -0.5j])
    assert evaluate(omega(), [u, v]) == pytest.approx(1.0)
    assert u @ matrix_at(omega()) @ v == pytest.approx(1.0)


def test_restrict_to_fiber():
    assert restrict(eta(), (0, 1)).is_zero()
    assert not restrict(omega(), (0, 2)).is_zero()


def test_cohomology_class_of_eta():
    np.testing.assert_allclose(cohomology_class(eta()), [0, 0, 0, 0, 0, 1])


def test_tiny_forms_are_not_pruned():
    assert not Form.basis(DIM, (0,), 1e-13).is_zero()
    product = wedge(Form.dx(DIM, 0) * 1e-7, Form.dx(DIM, 1) * 1e-7)
    assert product.coefficient((0, 1)).constant_term() == pytest.approx(1e-14)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("scale", [1e-8, 1e8])
def test_wedge_and_d_commute_with_scaling(seed, scale):
    rng = np.random.default_rng(seed)
    a = random_form(DIM, 1, 3, rng)
    b = random_form(DIM, 2, 3, rng)
    for scaled, expected in (
        (wedge(a * scale, b), wedge(a, b) * scale),
        (ext_d(a * scale), ext_d(a) * scale),
    ):
        assert not expected.is_zero()
        assert set(scaled.coeffs) == set(expected.coeffs)
        assert scaled.max_difference(expected) <= 1e-12 * expected.max_abs


def random_pair(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 9))
    p = int(rng.integers(1, dim))
    q = int(rng.integers(1, dim - p + 1))
    return dim, random_form(dim, p, 4, rng), random_form(dim, q, 4, rng), rng


@pytest.mark.parametrize("seed", range(10))
def test_random_wedge_is_graded_commutative(seed):
    _, a, b, _ = random_pair(seed)
    ab = wedge(a, b)
    ba = wedge(b, a) * (-1) ** (a.degree * b.degree)
    assert ab.max_difference(ba) <= 1e-12 * max(ab.max_abs, 1e-300)


@pytest.mark.parametrize("seed", range(10))
def test_random_d_squared_is_exactly_zero(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 9))
    form = random_form(dim, int(rng.integers(0, dim - 1)), 4, rng)
    assert ext_d(ext_d(form)).is_zero()


@pytest.mark.parametrize("seed", range(10))
def test_contraction_is_a_graded_derivation(seed):
    dim, a, b, rng = random_pair(seed)
    v = VectorField.constant(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    lhs = contract(wedge(a, b), v)
    rhs = wedge(contract(a, v), b) + wedge(a, contract(b, v)) * (-1) ** a.degree
    scale = max(a.max_abs * b.max_abs * float(np.abs(v.at(np.zeros(dim))).max()), 1e-300)
    assert lhs.max_difference(rhs) <= 1e-10 * scale


@pytest.mark.parametrize("scale", [1.0, 1e-14])
def test_from_matrix_drops_relative_roundoff(scale):
    matrix = np.zeros((DIM, DIM))
    matrix[0, 1], matrix[2, 3], matrix[0, 2] = 1.0, 2.0, 1e-17
    form = Form.from_matrix((matrix - matrix.T) * scale)
    assert set(form.coeffs) == {(0, 1), (2, 3)}
