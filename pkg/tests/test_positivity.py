import numpy as np
import pytest

from src.errors import BidegreeError, LemmaViolation, NotSemipositive, RangeError
from src.geometry.acs import standard_structure
from src.geometry.positivity import (
    SUBLEMMA_BUDGET,
    check_weak_positivity,
    cone_pairing,
    evaluate,
    point_form,
    random_strongly_positive,
    semipositive_rank,
    strong_decomposition,
    strong_monomial,
    verify_lemma_pair,
)
from src.models.form import Form
from src.models.point_form import DEGENERATE, NO_VIOLATION, STRICT, ZERO, PointForm, PositivityBudget

SMALL_BUDGET = PositivityBudget(restarts=3, steps=30, step_size=0.1)


def symplectic_point_form(n: int) -> PointForm:
    """sum dz_{2j} ^ dz_{2j+1} on C^n"""
    eye = np.eye(n)
    result = PointForm.zero(n, 2, 0)
    for j in range(n // 2):
        result = result + PointForm.covector(n, eye[2 * j]).wedge(PointForm.covector(n, eye[2 * j + 1]))
    return result


def test_zero_term_strongly_positive_form():
    assert random_strongly_positive(1, 1, 0).is_zero()


def test_strong_monomial_in_one_variable():
    assert strong_monomial(1, [[1]]).coeffs == {(0, 1): 1j}


def test_strong_monomial_evaluates_to_one():
    monomial = strong_monomial(2, [[1, 0], [0, 1]])
    assert evaluate(monomial, [[1, 0], [0, 1]]) == pytest.approx(1.0)


def test_random_strongly_positive_range():
    with pytest.raises(RangeError):
        random_strongly_positive(2, 3, 1)


def test_positive_area_form():
    verdict = check_weak_positivity(strong_monomial(1, [[1]]))
    assert verdict.status == NO_VIOLATION
    assert not verdict.violated


def test_negative_area_form():
    verdict = check_weak_positivity(strong_monomial(1, [[1]], -1.0))
    assert verdict.violated
    assert verdict.value == pytest.approx(-1.0)
    assert verdict.witness is not None


def test_symplectic_square_is_weakly_positive():
    omega = symplectic_point_form(2)
    assert check_weak_positivity(omega.wedge(omega.conjugate())).status == NO_VIOLATION


def test_descent_finds_negative_middle_form():
    omega = symplectic_point_form(4)
    negative = omega.wedge(omega.conjugate()) * -1.0
    assert check_weak_positivity(negative, SMALL_BUDGET, seed=3).violated


def test_weak_positivity_needs_kk_form():
    with pytest.raises(BidegreeError):
        check_weak_positivity(symplectic_point_form(2))


def test_cone_pairing_of_area_forms():
    first = strong_monomial(2, [[1, 0]])
    second = strong_monomial(2, [[0, 1]])
    assert cone_pairing(first, second) == pytest.approx(1.0)


def test_cone_pairing_with_zero():
    assert cone_pairing(PointForm.zero(2, 1, 1), strong_monomial(2, [[0, 1]])) == 0.0


def test_cone_pairing_degree_mismatch():
    with pytest.raises(BidegreeError):
        cone_pairing(strong_monomial(3, [[1, 0, 0]]), strong_monomial(3, [[0, 1, 0]]))


@pytest.mark.parametrize("seed", range(10))
def test_cone_duality(seed):
    omega = symplectic_point_form(4)
    weak = omega.wedge(omega.conjugate())
    strong = random_strongly_positive(4, 2, 3, seed)
    assert cone_pairing(weak, strong) >= -1e-10


@pytest.mark.parametrize("n,p", [(2, 1), (3, 1), (3, 2)])
def test_strong_decomposition_sums_back(n, p):
    form = random_strongly_positive(n, p, 2, seed=5)
    total = PointForm.zero(n, p, p)
    for coefficient, covectors in strong_decomposition(form):
        total = total + strong_monomial(n, covectors, coefficient)
    assert (total - form).max_abs <= 1e-9 * max(1.0, form.max_abs)


def test_semipositive_rank_of_pullback(model1):
    eta = point_form(model1.eta, standard_structure(4), np.zeros(4))
    verdict = semipositive_rank(eta)
    assert verdict.rank == 2
    assert verdict.tag == DEGENERATE


def test_semipositive_rank_of_zero():
    verdict = semipositive_rank(PointForm.zero(2, 1, 1))
    assert (verdict.rank, verdict.tag) == (0, ZERO)


def test_semipositive_rank_of_kahler_form():
    kahler = Form.basis(4, (0, 1)) + Form.basis(4, (2, 3))
    verdict = semipositive_rank(point_form(kahler, standard_structure(4), np.zeros(4)))
    assert (verdict.rank, verdict.tag) == (4, STRICT)


def test_indefinite_form_is_not_semipositive():
    indefinite = Form.basis(4, (0, 1)) - Form.basis(4, (2, 3))
    with pytest.raises(NotSemipositive):
        semipositive_rank(point_form(indefinite, standard_structure(4), np.zeros(4)))


def test_point_form_rejects_mixed_types(model1):
    mixed = model1.omega + model1.eta
    with pytest.raises(BidegreeError):
        point_form(mixed, standard_structure(4), np.zeros(4))


@pytest.mark.parametrize("n,p,trials,seed", [(1, 0, 20, 0), (1, 1, 10, 0), (2, 1, 10, 42), (2, 0, 10, 7)])
def test_lemma_pair_has_no_violations(n, p, trials, seed):
    report = verify_lemma_pair(n, p, trials, seed)
    assert report["violations"] == []
    assert (report["n"], report["p"], report["trials"]) == (n, p, trials)


def test_injected_bug_is_caught():
    with pytest.raises(LemmaViolation) as info:
        verify_lemma_pair(2, 1, 10, seed=0, inject_bug=True)
    assert info.value.report["violations"]


def test_lemma_pair_range():
    with pytest.raises(RangeError):
        verify_lemma_pair(4, 1, 1)


@pytest.mark.parametrize("n,p", [(n, p) for n in (1, 2, 3) for p in range(n + 1)])
def test_lemma_pair_covers_every_bidegree(n, p):
    report = verify_lemma_pair(n, p, trials=4, seed=n + 10 * p)
    assert report["violations"] == []


@pytest.mark.parametrize("n,p", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 2), (4, 3)])
@pytest.mark.parametrize("seed", range(3))
def test_strongly_positive_forms_are_weakly_positive(n, p, seed):
    form = random_strongly_positive(n, p, 3, seed)
    assert check_weak_positivity(form, SMALL_BUDGET, seed=seed).status == NO_VIOLATION


@pytest.mark.parametrize("seed", range(5))
def test_weak_times_strong_is_weakly_positive(seed):
    omega = symplectic_point_form(4)
    weak = omega.wedge(omega.conjugate())
    product = weak.wedge(random_strongly_positive(4, 1, 2, seed))
    assert (product.p, product.q) == (3, 3)
    assert check_weak_positivity(product, seed=seed).status == NO_VIOLATION


@pytest.mark.parametrize("seed", range(5))
def test_strong_times_strong_is_weakly_positive(seed):
    product = random_strongly_positive(4, 1, 2, seed).wedge(random_strongly_positive(4, 1, 2, seed + 100))
    assert check_weak_positivity(product, SMALL_BUDGET, seed=seed).status == NO_VIOLATION


def test_sublemma_budget_is_a_scaled_default():
    budget = PositivityBudget().scaled(0.1)
    assert (budget.restarts, budget.steps, budget.step_size) == (10, 20, PositivityBudget().step_size)
    assert SUBLEMMA_BUDGET == budget
    assert PositivityBudget(restarts=3, steps=30).scaled(0.01) == PositivityBudget(restarts=1, steps=1)
