"""Strong and weak positivity of (p,p)-forms, cone duality and the vanishing lemmas"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BidegreeError, LemmaViolation, NotSemipositive, RangeError
from ..models.form import Form
from ..models.point_form import (
    DEGENERATE,
    NO_VIOLATION,
    STRICT,
    VIOLATED,
    ZERO,
    PointForm,
    PositivityBudget,
    PositivityVerdict,
    RankVerdict,
    power,
)
from ..models.structure import ComplexStructureField, complex_frame
from ..utils.multiindex import increasing
from ..utils.numerics import compound, conditioned_frame, minors, null_space
from .exterior import coefficient_vector

logger = logging.getLogger(__name__)

POSITIVITY_TOL = 1e-10
ZERO_TOL = 1e-10
# one search per monomial and trial, reached only by middle bidegrees
SUBLEMMA_BUDGET = PositivityBudget().scaled(0.1)


def _sigma(k: int) -> complex:
    """(-i)^k (-1)^{k(k-1)/2}: sign of the evaluation on (x_1, xbar_1, ..., x_k, xbar_k)"""
    return (-1j) ** k * (-1) ** (k * (k - 1) // 2)


def _check_bidegree(a: PointForm):
    if a.p != a.q:
        raise BidegreeError(f"positivity needs a (k, k)-form, got ({a.p}, {a.q})")


def value_matrix(a: PointForm) -> np.ndarray:
    """Hermitian G with value(x_1, ..., x_k) = m^H G m, m the k-minors of [x_1 ... x_k]"""
    _check_bidegree(a)
    G = _sigma(a.p) * a.matrix().T
    return 0.5 * (G + G.conj().T)


def evaluate(a: PointForm, vectors: Sequence[Sequence[complex]]) -> float:
    """(-i)^k a(x_1, xbar_1, ..., x_k, xbar_k) for (1,0)-vectors given by their dz components"""
    _check_bidegree(a)
    if a.p == 0:
        return float(np.real(a.coeffs.get((), 0j)))
    X = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    m = minors(X, a.p)
    return float(np.real(m.conj() @ value_matrix(a) @ m))


def strong_monomial(n: int, xis: Sequence[Sequence[complex]], coefficient: float = 1.0) -> PointForm:
    """coefficient * i^p xi_1 ^ xibar_1 ^ ... ^ xi_p ^ xibar_p"""
    result = PointForm.one(n) * complex(coefficient)
    for xi in xis:
        pair = PointForm.covector(n, xi).wedge(PointForm.covector(n, xi, conjugate=True))
        result = result.wedge(pair * 1j)
    return result


def random_strongly_positive(n: int, p: int, k_terms: int, seed: int = 0) -> PointForm:
    """Sum of k_terms strong monomials with random covectors and uniform coefficients"""
    if not 1 <= p <= n:
        raise RangeError(f"bidegree ({p}, {p}) on C^{n}", n=n, p=p)
    rng = np.random.default_rng([seed, n, p])
    result = PointForm.zero(n, p, p)
    for _ in range(k_terms):
        xis = rng.standard_normal((p, n)) + 1j * rng.standard_normal((p, n))
        result = result + strong_monomial(n, xis, rng.uniform(0.0, 1.0))
    return result


def cone_pairing(weak: PointForm, strong: PointForm) -> float:
    """Top coefficient of weak ^ strong against prod_j (i dz_j ^ dzbar_j)"""
    n = weak.n
    if weak.p != weak.q or strong.p != strong.q or weak.p + strong.p != n:
        raise BidegreeError(
            f"cannot pair ({weak.p}, {weak.q}) with ({strong.p}, {strong.q}) on C^{n}"
        )
    top = weak.wedge(strong).coeffs.get(tuple(range(2 * n)), 0j)
    volume = 1j ** n * (-1) ** (n * (n - 1) // 2)
    return float(np.real(top / volume))


def hermitian_matrix(eta: PointForm) -> np.ndarray:
    """H with eta(x, Ix) = zeta^H H zeta, zeta = dz(x); (1,1)-forms only"""
    if (eta.p, eta.q) != (1, 1):
        raise BidegreeError(f"hermitian_matrix needs a (1,1)-form, got ({eta.p}, {eta.q})")
    return 2 * value_matrix(eta)


def semipositive_rank(eta: PointForm, tol: float = POSITIVITY_TOL, rank_tol: float = 1e-9) -> RankVerdict:
    """
    Real rank of a semipositive (1,1)-form and its classification.

    Raises:
        NotSemipositive: with the eigenvector of a negative eigenvalue
    """
    H = hermitian_matrix(eta)
    eigenvalues, vectors = np.linalg.eigh(H)
    scale = max(1.0, float(np.max(np.abs(eigenvalues), initial=0.0)))
    if eigenvalues[0] < -tol * scale:
        raise NotSemipositive(
            f"eigenvalue {eigenvalues[0]:.3e} is negative",
            direction=vectors[:, 0],
            value=float(eigenvalues[0]),
        )
    top = float(eigenvalues[-1])
    count = 0 if top <= 0 else int(np.sum(eigenvalues > rank_tol * top))
    if count == 0:
        tag = ZERO
    elif count == eta.n:
        tag = STRICT
    else:
        tag = DEGENERATE
    return RankVerdict(2 * count, tag, tuple(float(e) for e in eigenvalues))


def _adjugate_matrix(a: PointForm) -> np.ndarray:
    """Hermitian K with value = y^H K y for k = n-1, y_a = (-1)^a m_{complement of a}"""
    n = a.n
    rows = list(increasing(n, n - 1))
    # rows are ordered by increasing subsets, so rows[i] omits index n-1-i
    omitted = [next(r for r in range(n) if r not in I) for I in rows]
    G = value_matrix(a)
    order = np.argsort(omitted)
    signs = np.array([(-1) ** r for r in range(n)], dtype=float)
    K = G[np.ix_(order, order)]
    return signs[:, None] * K * signs[None, :]


def _witness_from_y(n: int, y: np.ndarray) -> List[np.ndarray]:
    """n-1 orthonormal vectors whose minor vector is proportional to y"""
    X = null_space(y[None, :])
    return [X[:, j] for j in range(X.shape[1])]


def _slot_hermitian(G: np.ndarray, X: np.ndarray, slot: int) -> np.ndarray:
    """H_s with m^H G m = x_s^H H_s x_s for the column x_s of X"""
    n, k = X.shape
    others = [c for c in range(k) if c != slot]
    subsets = list(increasing(n, k))
    L = np.zeros((len(subsets), n), dtype=complex)
    for a, I in enumerate(subsets):
        for position, r in enumerate(I):
            rest = [i for i in I if i != r]
            minor = np.linalg.det(X[np.ix_(rest, others)]) if others else 1.0
            L[a, r] = (-1) ** (position + slot) * minor
    return L.conj().T @ G @ L


def _objective(G: np.ndarray, X: np.ndarray) -> float:
    m = minors(X, X.shape[1])
    return float(np.real(m.conj() @ G @ m))


def _descent(G: np.ndarray, n: int, k: int, budget: PositivityBudget, rng: np.random.Generator,
             tol: float) -> Tuple[float, np.ndarray, int]:
    """Projected gradient descent on the product of unit spheres with random restarts"""
    best_value, best = np.inf, None
    restarts = 0
    for _ in range(budget.restarts):
        restarts += 1
        X = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        X /= np.linalg.norm(X, axis=0)
        value = _objective(G, X)
        step = budget.step_size
        for _ in range(budget.steps):
            improved = False
            for slot in range(k):
                H = _slot_hermitian(G, X, slot)
                candidate = X[:, slot] - step * (H @ X[:, slot])
                norm = np.linalg.norm(candidate)
                if norm == 0:
                    continue
                trial = X.copy()
                trial[:, slot] = candidate / norm
                trial_value = _objective(G, trial)
                if trial_value < value:
                    X, value, improved = trial, trial_value, True
            if not improved:
                step /= 2
                if step < 1e-12:
                    break
        if value < best_value:
            best_value, best = value, X
        if best_value < -tol:
            break
    return best_value, best, restarts


def check_weak_positivity(
    a: PointForm,
    budget: Optional[PositivityBudget] = None,
    seed: int = 0,
    tol: float = POSITIVITY_TOL,
) -> PositivityVerdict:
    """
    Search for unit (1,0)-vectors on which a real (k, k)-form is negative.

    Bidegrees 0, 1, n-1 and n are decided exactly from eigenvalues; other
    bidegrees use random restarts of projected gradient descent.
    """
    _check_bidegree(a)
    budget = budget or PositivityBudget()
    n, k = a.n, a.p
    if a.is_zero():
        return PositivityVerdict(NO_VIOLATION, 0, seed)
    if k == 0:
        value = float(np.real(a.coeffs[()]))
        status = VIOLATED if value < -tol else NO_VIOLATION
        return PositivityVerdict(status, 1, seed, [] if status == VIOLATED else None, value)
    if k == n:
        vectors = [np.eye(n, dtype=complex)[:, j] for j in range(n)]
        value = evaluate(a, vectors)
        status = VIOLATED if value < -tol else NO_VIOLATION
        return PositivityVerdict(status, 1, seed, vectors if status == VIOLATED else None, value)
    if k == 1:
        eigenvalues, eigenvectors = np.linalg.eigh(value_matrix(a))
        vectors = [eigenvectors[:, 0]]
    elif k == n - 1:
        eigenvalues, eigenvectors = np.linalg.eigh(_adjugate_matrix(a))
        vectors = _witness_from_y(n, eigenvectors[:, 0])
    else:
        rng = np.random.default_rng(seed)
        value, X, restarts = _descent(value_matrix(a), n, k, budget, rng, tol)
        if value < -tol:
            logger.debug("weak positivity violated after %d restarts: %.3e", restarts, value)
            return PositivityVerdict(VIOLATED, restarts, seed, [X[:, j] for j in range(k)], value)
        return PositivityVerdict(NO_VIOLATION, restarts, seed, None, value)
    value = evaluate(a, vectors)
    if eigenvalues[0] < -tol and value < -tol:
        return PositivityVerdict(VIOLATED, 1, seed, vectors, value)
    return PositivityVerdict(NO_VIOLATION, 1, seed, None, float(eigenvalues[0]))


def strong_decomposition(a: PointForm, tol: float = POSITIVITY_TOL) -> List[Tuple[float, np.ndarray]]:
    """
    Write a weakly positive (1,1)- or (n-1,n-1)-form as a sum of strong monomials.

    Returns:
        (coefficient, covectors) pairs with strong_monomial(n, covectors, coefficient)
        summing to a

    Raises:
        NotSemipositive: on a negative eigenvalue
    """
    _check_bidegree(a)
    n, k = a.n, a.p
    if k == 1:
        matrix = value_matrix(a)
    elif k == n - 1:
        matrix = _adjugate_matrix(a)
    else:
        raise BidegreeError(f"decompositions are built for (1,1) and ({n - 1},{n - 1}) forms, got ({k},{k})")
    eigenvalues, vectors = np.linalg.eigh(matrix)
    scale = max(1.0, float(np.max(np.abs(eigenvalues), initial=0.0)))
    if eigenvalues[0] < -tol * scale:
        raise NotSemipositive(
            f"eigenvalue {eigenvalues[0]:.3e} is negative",
            direction=vectors[:, 0],
            value=float(eigenvalues[0]),
        )
    terms = []
    for eigenvalue, v in zip(eigenvalues, vectors.T):
        if eigenvalue <= tol * scale:
            continue
        w = v.conj()
        covectors = w[None, :] if k == 1 else null_space(w[None, :]).T
        unit = strong_monomial(n, covectors)
        reference = value_matrix(unit) if k == 1 else _adjugate_matrix(unit)
        weight = float(np.real(v.conj() @ reference @ v))
        terms.append((float(eigenvalue) / weight, covectors))
    return terms


def point_form(form: Form, J: ComplexStructureField, point: Sequence[float], tol: float = 1e-10) -> PointForm:
    """
    Coefficients of a torus form in the complex coframe of J at a point.

    Raises:
        BidegreeError: when the form is not of a single (p, q) type there
    """
    matrix = J.matrix_at(point)
    frame = complex_frame(matrix)
    n = J.dim // 2
    values = compound(frame, form.degree).T @ coefficient_vector(form, point)
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    coeffs: Dict[Tuple[int, ...], complex] = {}
    bidegrees = set()
    for slots, value in zip(increasing(2 * n, form.degree), values):
        if abs(value) <= tol * scale:
            continue
        coeffs[slots] = value
        bidegrees.add(sum(1 for s in slots if s < n))
    if len(bidegrees) > 1:
        raise BidegreeError(f"form mixes types {sorted(bidegrees)} at {list(point)}")
    p = bidegrees.pop() if bidegrees else form.degree // 2
    return PointForm(n, p, form.degree - p, coeffs)


# vanishing lemmas


def _is_zero(product: PointForm, bound: PointForm, tol: float) -> bool:
    """Relative zero test; `bound` is the same product taken over coefficient moduli"""
    return product.max_abs <= tol * max(bound.max_abs, 1e-300)


def symplectic_form(S: np.ndarray, n: int) -> PointForm:
    """S^*(sum_j dz_j ^ dz_{n+j}) on C^{2n}"""
    size = 2 * n
    result = PointForm.zero(size, 2, 0)
    for j in range(n):
        result = result + PointForm.covector(size, S[j]).wedge(PointForm.covector(size, S[n + j]))
    return result


def lemma_trial(
    n: int,
    p: int,
    seed: int,
    index: int,
    inject_bug: bool = False,
    budget: PositivityBudget = SUBLEMMA_BUDGET,
    tol: float = ZERO_TOL,
) -> List[dict]:
    """
    One random instance of the vanishing lemma and its sublemma; returns the violations found.

    Every fourth instance puts rho on the last p+1 pulled-back coordinates, where
    Omega^{n-p} ^ rho vanishes.
    """
    rng = np.random.default_rng([seed, index])
    size = 2 * n
    S = conditioned_frame(rng, size)
    omega = symplectic_form(S, n)
    omega_power = power(omega, n - p)
    omega_bar = omega_power if inject_bug else omega_power.conjugate()
    both = omega_power.wedge(omega_bar)
    both_bound = omega_power.absolute().wedge(omega_bar.absolute())

    monomials = []
    if index % 4 == 3:
        last = S[size - p - 1:]
        for _ in range(int(rng.integers(1, 3))):
            mixing = rng.standard_normal((p + 1, p + 1)) + 1j * rng.standard_normal((p + 1, p + 1))
            monomials.append(strong_monomial(size, mixing @ last, rng.uniform(0.1, 1.0)))
        kind = "structured"
    else:
        for _ in range(int(rng.integers(1, 4))):
            xis = rng.standard_normal((p + 1, size)) + 1j * rng.standard_normal((p + 1, size))
            monomials.append(strong_monomial(size, xis, rng.uniform(0.1, 1.0)))
        kind = "random"
    rho = monomials[0]
    for monomial in monomials[1:]:
        rho = rho + monomial
    rho_bound = PointForm.zero(size, p + 1, p + 1)
    for monomial in monomials:
        rho_bound = rho_bound + monomial.absolute()

    violations = []
    left_zero = _is_zero(omega_power.wedge(rho), omega_power.absolute().wedge(rho_bound), tol)
    right_zero = _is_zero(both.wedge(rho), both_bound.wedge(rho_bound), tol)
    if left_zero != right_zero:
        violations.append({
            "kind": "equivalence",
            "instance": kind,
            "index": index,
            "omega_power_rho_zero": left_zero,
            "triple_zero": right_zero,
            "frame": [[[z.real, z.imag] for z in row] for row in S],
        })
    for position, monomial in enumerate(monomials):
        if _is_zero(omega_power.wedge(monomial), omega_power.absolute().wedge(monomial.absolute()), tol):
            continue
        triple = both.wedge(monomial)
        if _is_zero(triple, both_bound.wedge(monomial.absolute()), tol):
            violations.append({"kind": "sublemma_zero", "instance": kind, "index": index, "term": position})
            continue
        verdict = check_weak_positivity(triple, budget, seed=int(rng.integers(2 ** 31)))
        if verdict.violated:
            violations.append({
                "kind": "sublemma_negative",
                "instance": kind,
                "index": index,
                "term": position,
                "verdict": verdict.to_json(),
            })
    return violations


def lemma_report(n: int, p: int, trials: int, seed: int, violations: List[dict]) -> dict:
    return {
        "lemma": "omega_power_rho_vanishing",
        "n": n,
        "p": p,
        "trials": trials,
        "violations": sorted(violations, key=lambda v: (v["index"], v["kind"], v.get("term", -1))),
        "seed": seed,
    }


def verify_lemma_pair(n: int, p: int, trials: int, seed: int = 0, inject_bug: bool = False) -> dict:
    """
    Randomized check of Omega^{n-p} ^ rho = 0  <=>  Omega^{n-p} ^ conj(Omega)^{n-p} ^ rho = 0
    for strongly positive rho of bidegree (p+1, p+1), plus the sublemma on each monomial.

    Raises:
        LemmaViolation: carrying the full campaign report
    """
    if not (0 <= p <= n and 1 <= n <= 3):
        raise RangeError(f"lemma campaigns cover 1 <= n <= 3, 0 <= p <= n; got n={n}, p={p}", n=n, p=p)
    violations = []
    for index in range(trials):
        violations.extend(lemma_trial(n, p, seed, index, inject_bug))
    report = lemma_report(n, p, trials, seed, violations)
    if violations:
        raise LemmaViolation(f"{len(violations)} violations for n={n}, p={p}", report=report)
    return report
