from pathlib import Path

import numpy as np
import pytest

from src.errors import ArityError, ConeError, ConfigError, NotFujikiType, NotIsotropic, SerializationError
from src.geometry.bbf import (
    PRESETS,
    bbf_fit,
    bbf_via_kahler,
    bbf_via_symplectic,
    fujiki_product,
    isotropic_product_vanishes,
    kahler_scale,
    load_preset,
    naive_fujiki_product,
    nilpotency_index,
    random_isotropic,
    top_power,
    torus_lattice,
)
from src.geometry.exterior import cohomology_class
from src.models.lattice import FujikiRing, QuadraticSpace

E = np.eye(4)


def test_pairing_for_surfaces(ring1, rng):
    for _ in range(5):
        a, b = rng.standard_normal(4), rng.standard_normal(4)
        assert fujiki_product(ring1, [a, b]) == pytest.approx(ring1.space.q(a, b))


def test_isotropic_class_has_zero_square(ring1):
    eta = E[0] + E[3]
    assert fujiki_product(ring1, [eta, eta]) == 0.0
    assert top_power(ring1, eta) == 0.0


def test_top_power_of_unit_class(ring1):
    assert top_power(ring1, E[0]) == 1.0


def test_equal_arguments_give_power_of_q(ring2, rng):
    eta = rng.standard_normal(7)
    expected = ring2.space.q(eta, eta) ** 2
    assert fujiki_product(ring2, [eta] * 4) == pytest.approx(expected, rel=1e-12)


def test_fujiki_constant_divides(ring1):
    scaled = FujikiRing(ring1.space, n=1, C=4.0)
    assert top_power(scaled, E[0]) == pytest.approx(0.25)
    assert scaled.lam == 0.25


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matching_agrees_with_permutations(n, rng):
    gram = np.diag([1.0, 1.0, 1.0, -1.0, -1.0])
    ring = FujikiRing(QuadraticSpace(gram), n=n)
    for _ in range(3):
        classes = [rng.integers(-3, 4, 5).astype(float) for _ in range(2 * n)]
        assert fujiki_product(ring, classes) == naive_fujiki_product(ring, classes)


def test_product_is_symmetric(ring2, rng):
    classes = [rng.standard_normal(7) for _ in range(4)]
    shuffled = [classes[i] for i in (2, 0, 3, 1)]
    assert fujiki_product(ring2, shuffled) == pytest.approx(fujiki_product(ring2, classes), rel=1e-12)


def test_wrong_arity(ring1):
    with pytest.raises(ArityError):
        fujiki_product(ring1, [E[0]] * 3)


def test_isotropic_precondition(ring1):
    with pytest.raises(NotIsotropic):
        isotropic_product_vanishes(ring1, [E[0] + E[3], E[1]])


def test_orthogonal_isotropic_pair(split):
    ring = FujikiRing(split, n=1)
    assert isotropic_product_vanishes(ring, [E[0] + E[2], E[1] + E[3]])


def test_three_orthogonal_isotropics(ring2):
    basis = np.eye(7)
    etas = [basis[i] + basis[3 + i] for i in range(3)]
    assert isotropic_product_vanishes(ring2, etas)


@pytest.mark.parametrize("seed", range(5))
def test_random_isotropic_families_vanish(ring2, seed):
    etas = random_isotropic(ring2, 3, np.random.default_rng(seed))
    assert isotropic_product_vanishes(ring2, etas)


def test_random_isotropic_needs_room(ring1):
    with pytest.raises(NotIsotropic):
        random_isotropic(ring1, 2, np.random.default_rng(0))


def test_nilpotency(ring2, rng):
    assert nilpotency_index(ring2, rng.standard_normal(7)) == 4
    (isotropic,) = random_isotropic(ring2, 1, rng)
    assert nilpotency_index(ring2, isotropic) == 2
    assert nilpotency_index(ring2, np.zeros(7)) == 0


def test_kahler_formula_for_surfaces(ring1, rng):
    omega = 2 * E[0] + 0.1 * E[3]
    a, b = rng.standard_normal(4), rng.standard_normal(4)
    assert kahler_scale(ring1, omega) == 1.0
    assert bbf_via_kahler(ring1, a, b, omega) == pytest.approx(ring1.space.q(a, b))


def test_kahler_ratio_is_constant(ring2, rng):
    omega = 3 * np.eye(7)[0] + 0.2 * rng.standard_normal(7)
    mu = kahler_scale(ring2, omega)
    for _ in range(20):
        a, b = rng.standard_normal(7), rng.standard_normal(7)
        pairing = ring2.space.q(a, b)
        if abs(pairing) < 1e-3:
            continue
        assert bbf_via_kahler(ring2, a, b, omega) / pairing == pytest.approx(mu, rel=1e-9)
    assert bbf_via_kahler(ring2, omega, omega, omega) > 0


def test_kahler_needs_positive_class(ring1):
    with pytest.raises(ConeError):
        bbf_via_kahler(ring1, E[0], E[1], E[3])


def test_symplectic_formula_ratio(ring2, rng):
    basis = np.eye(7)
    sigma = basis[0] + 1j * basis[1]
    ratios = []
    while len(ratios) < 10:
        eta = rng.standard_normal(7)
        norm = ring2.space.q(eta, eta)
        if abs(norm) < 1e-2:
            continue
        ratios.append(bbf_via_symplectic(ring2, eta, sigma) / norm)
    assert ratios[0] > 0
    np.testing.assert_allclose(ratios, ratios[0], rtol=1e-9)


def test_symplectic_needs_period(ring1):
    with pytest.raises(ConeError):
        bbf_via_symplectic(ring1, E[0], E[0] + 1j * E[3])


@pytest.mark.parametrize("name", ["ring1", "ring2"])
def test_fit_recovers_ring(name, request):
    ring = request.getfixturevalue(name)
    gram, lam = bbf_fit(ring.n, ring.b, lambda classes: fujiki_product(ring, classes), np.eye(ring.b)[0])
    np.testing.assert_allclose(gram, ring.space.gram, atol=1e-10)
    assert lam == pytest.approx(ring.lam)


def test_fit_gauge_and_sign(ring1):
    positive = 2 * E[1] + E[3]
    gram, lam = bbf_fit(1, 4, lambda classes: fujiki_product(ring1, classes), positive)
    scale = ring1.space.q(positive, positive)
    assert positive @ gram @ positive == pytest.approx(1.0)
    np.testing.assert_allclose(gram * scale, ring1.space.gram, atol=1e-10)
    assert lam == pytest.approx(scale)


def test_fit_rejects_perturbed_oracle(ring2):
    def oracle(classes):
        return fujiki_product(ring2, classes) + 1e-3 * np.prod([c[1] for c in classes])

    with pytest.raises(NotFujikiType):
        bbf_fit(2, 7, oracle, np.eye(7)[0])


@pytest.mark.parametrize("name,signature", [("toy4", (3, 0, 1)), ("k3", (3, 0, 19)), ("toy7", (3, 0, 4))])
def test_presets(name, signature):
    ring = load_preset(name)
    assert ring.name == name
    assert ring.space.signature() == signature


def test_every_preset_is_listed():
    assert set(PRESETS) == {"toy4", "k3", "toy7"}


def test_unknown_preset():
    with pytest.raises(ConfigError):
        load_preset("nonexistent-lattice")


def test_preset_from_malformed_file(tmp_path: Path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(SerializationError):
        load_preset(str(path))


def test_torus_lattice(model1):
    space = torus_lattice().space
    omega = cohomology_class(model1.omega)
    eta = cohomology_class(model1.eta).real
    assert space.q(omega.real, omega.real) == pytest.approx(2.0)
    assert space.q(omega.real, omega.imag) == pytest.approx(0.0)
    assert space.q(eta, eta) == 0.0
    assert space.q(eta, omega.real) == 0.0
    assert space.signature() == (3, 0, 3)


@pytest.fixture
def ring3():
    gram = np.diag([1.0] * 4 + [-1.0] * 4)
    return FujikiRing(QuadraticSpace(gram, "sig44"), n=3, C=1.0, name="sig44")


@pytest.mark.parametrize("seed", range(20))
def test_random_isotropic_families_vanish_in_dimension_six(ring3, seed):
    etas = random_isotropic(ring3, 4, np.random.default_rng(seed))
    assert isotropic_product_vanishes(ring3, etas)
