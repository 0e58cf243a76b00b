from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from src.errors import NotNonDegenerate, RealKernelError, SphereError
from src.geometry.acs import (
    antiholomorphic_bundle,
    cartan_defect,
    hermitian_form,
    holomorphic_form,
    induced_structure,
    integrability_defect,
    kernel_structure,
    random_triple,
    rotation_certificate,
    standard_matrix,
    standard_structure,
    standard_triple,
    structure_from_antiholomorphic,
)
from src.geometry.exterior import matrix_at, real_part, imag_part, wedge
from src.models.form import Form, VectorField
from src.models.fourier import FourierScalar
from src.models.structure import FourierStructureField, KernelStructureField, SubBundleBasis
from src.utils.numerics import subspace_distance

DIM = 4
ORIGIN = np.zeros(DIM)
DZBAR_1 = [0.5, 0.5j, 0, 0]
DZBAR_2 = [0, 0, 0.5, 0.5j]


def omega():
    return wedge(Form.dz(DIM, 0), Form.dz(DIM, 1))


def omega_t(t):
    eta = wedge(Form.dz(DIM, 1), Form.dzbar(DIM, 1)) * 0.5j
    return omega() + eta * t


def analytic_kernel(t):
    """span{d/dzbar_1, d/dzbar_2 + (it/2) d/dz_1}"""
    dz_1 = np.array([0.5, -0.5j, 0, 0])
    return np.column_stack([DZBAR_1, np.array(DZBAR_2) + 0.5j * t * dz_1])


def test_standard_structure_squares_to_minus_identity():
    matrix = standard_matrix(8)
    np.testing.assert_allclose(matrix @ matrix, -np.eye(8))


def test_standard_triple_is_quaternionic():
    h = standard_triple(2)
    np.testing.assert_allclose(h.I @ h.J, h.K, atol=1e-14)


def test_kernel_of_standard_form_is_standard_structure():
    J = kernel_structure(omega())
    np.testing.assert_allclose(J.matrix_at(ORIGIN), standard_matrix(DIM), atol=1e-12)


@pytest.mark.parametrize("t", [0, 1, 1j, 2, 5 - 5j, 10j])
def test_kernel_structure_of_family(t):
    J = kernel_structure(omega_t(t))
    assert subspace_distance(J.kernel_at(ORIGIN), analytic_kernel(t)) < 1e-10


def test_kernel_structure_real_kernel():
    form = Form.basis(DIM, (0, 1)) + Form.basis(DIM, (0, 2), 1j)
    with pytest.raises(NotNonDegenerate) as info:
        kernel_structure(form)
    vector = np.asarray(info.value.vector)
    assert abs(abs(vector[3]) - 1) < 1e-10


def test_structure_from_standard_bundle():
    J = structure_from_antiholomorphic(SubBundleBasis.constant([DZBAR_1, DZBAR_2]))
    np.testing.assert_allclose(J.matrix_at(ORIGIN), standard_matrix(DIM), atol=1e-12)


def test_structure_from_bundle_matches_kernel():
    basis = analytic_kernel(2)
    J = structure_from_antiholomorphic(SubBundleBasis.constant([basis[:, 0], basis[:, 1]]))
    expected = kernel_structure(omega_t(2)).matrix_at(ORIGIN)
    np.testing.assert_allclose(J.matrix_at(ORIGIN), expected, atol=1e-10)


def test_structure_from_real_bundle():
    with pytest.raises(RealKernelError):
        structure_from_antiholomorphic(SubBundleBasis.constant([[1, 0, 0, 0], [0, 1, 0, 0]]))


def test_antiholomorphic_bundle_of_standard_structure():
    bundle = antiholomorphic_bundle(standard_structure(DIM))
    assert subspace_distance(bundle.values_at(ORIGIN), np.column_stack([DZBAR_1, DZBAR_2])) < 1e-12


def test_standard_structure_is_integrable():
    assert integrability_defect(standard_structure(DIM)) == 0.0


@pytest.mark.parametrize("t", [1, 2, 1j, 5 - 5j])
def test_family_structure_is_integrable(t):
    assert integrability_defect(kernel_structure(omega_t(t))) <= 1e-12


def test_twisted_bundle_is_not_integrable():
    twist = FourierScalar.sin(DIM, 2, amplitude=0.5)
    first = VectorField.d_dzbar(DIM, 0) + VectorField.d_dz(DIM, 1) * twist
    bundle = SubBundleBasis(DIM, 2, (first, VectorField.d_dzbar(DIM, 1)))
    J = structure_from_antiholomorphic(bundle)
    assert integrability_defect(J) > 1e-2


def test_closed_form_has_no_cartan_defect():
    assert cartan_defect(omega(), standard_structure(DIM)) == 0.0


def test_non_closed_perturbation_has_cartan_defect():
    perturbation = wedge(Form.dzbar(DIM, 0), Form.dzbar(DIM, 1)) * FourierScalar.sin(DIM, 0)
    assert cartan_defect(omega() + perturbation, standard_structure(DIM)) > 0.1


def test_induced_structures():
    h = standard_triple(1)
    np.testing.assert_allclose(induced_structure(h, 1, 0, 0).matrix_at(ORIGIN), h.I)
    np.testing.assert_allclose(induced_structure(h, 0, 1, 0).matrix_at(ORIGIN), h.J)
    mixed = induced_structure(h, 1 / np.sqrt(2), 1 / np.sqrt(2), 0).matrix_at(ORIGIN)
    np.testing.assert_allclose(mixed @ mixed, -np.eye(DIM), atol=1e-12)


def test_induced_structure_off_sphere():
    with pytest.raises(SphereError):
        induced_structure(standard_triple(1), 1, 1, 0)


def test_hermitian_forms_of_j_and_k():
    h = standard_triple(1)
    assert hermitian_form(h, 0, 1, 0).max_difference(real_part(omega())) < 1e-12
    assert hermitian_form(h, 0, 0, 1).max_difference(imag_part(omega())) < 1e-12
    assert holomorphic_form(h).max_difference(omega()) < 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_triple_stays_quaternionic(seed):
    h = random_triple(1, seed)
    np.testing.assert_allclose(h.J @ h.J, -np.eye(DIM), atol=1e-9)
    np.testing.assert_allclose(h.I @ h.J @ h.K, -np.eye(DIM), atol=1e-9)


@pytest.mark.parametrize("t", [0, 1, 1j, 3 - 2j])
def test_rotation_certificate(t):
    h = standard_triple(1)
    residual, smallest = rotation_certificate(h, matrix_at(omega_t(t)), t)
    assert residual < 1e-12
    assert smallest > 0.5


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("seed", range(4))
def test_random_structure_survives_bundle_roundtrip(n, seed):
    J = FourierStructureField.constant(random_triple(n, seed).J)
    rebuilt = structure_from_antiholomorphic(antiholomorphic_bundle(J), seed=seed)
    np.testing.assert_allclose(rebuilt.matrix_at(np.zeros(4 * n)), random_triple(n, seed).J, atol=1e-9)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("seed", range(4))
def test_kernel_of_random_holomorphic_form_is_i(n, seed):
    h = random_triple(n, seed)
    omega = hermitian_form(h, 0, 1, 0) + hermitian_form(h, 0, 0, 1) * 1j
    assert omega.max_difference(holomorphic_form(h)) < 1e-12
    J = kernel_structure(omega, seed=seed)
    np.testing.assert_allclose(J.matrix_at(np.zeros(4 * n)), h.I, atol=1e-9)


def test_kernel_cache_is_shared_across_threads():
    field = KernelStructureField(omega_t(2))
    points = [np.full(DIM, k / 10) for k in range(10)] * 20
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(field.matrix_at, points))
    assert len(field._cache) == 10
    for point, result in zip(points, results):
        assert result is field.matrix_at(point)
