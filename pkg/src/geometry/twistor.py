"""Degenerate twistor families Omega + t eta on flat torus models"""

import logging
from math import comb
from typing import List, Sequence

import numpy as np

from ..errors import (
    FiberDriftError,
    LiftError,
    NotNonDegenerate,
    PowerConditionViolated,
    RangeError,
    StructureError,
    TwistorForgeError,
)
from ..models.form import Form
from ..models.fourier import FourierScalar
from ..models.period import PeriodPoint, Plane
from ..models.report import Check
from ..models.structure import ComplexStructureField
from ..models.torus import FamilyMember, TorusModel
from ..utils.numerics import evaluation_grid, rank
from .acs import (
    integrability_defect,
    kernel_structure,
    rotation_certificate,
    standard_matrix,
    standard_triple,
    structure_distance,
)
from .bbf import torus_lattice
from .exterior import cohomology_class, ext_d, lift, matrix_at, power, restrict, type_norm, wedge
from .exterior import conjugate as conjugate_form
from .perdom import canonical_representative, plane_from_frame
from .positivity import point_form, semipositive_rank

logger = logging.getLogger(__name__)

DEFAULT_TS = (0j, 1 + 0j, 1j, 3 - 2j, 10j)
HOLOMORPHY_STEP = 1e-4


def standard_model(n: int) -> TorusModel:
    """
    T^{4n} with Omega = sum dz_j ^ dz_{n+j}, fibered over the z_{n+1}, ..., z_{2n} coordinates.

    eta = (i/2) sum dz_{n+j} ^ dzbar_{n+j} is the pullback of the flat Kähler form of the base.
    """
    if not 1 <= n <= 3:
        raise RangeError(f"standard models exist for n = 1, 2, 3, got {n}", n=n)
    dim = 4 * n
    omega = Form.zero(dim, 2)
    eta = Form.zero(dim, 2)
    for j in range(n):
        omega = omega + wedge(Form.dz(dim, j), Form.dz(dim, n + j))
        eta = eta + wedge(Form.dz(dim, n + j), Form.dzbar(dim, n + j)) * 0.5j
    model = TorusModel(
        n=n,
        triple=standard_triple(n),
        omega=omega,
        eta=eta,
        base_axes=tuple(range(2 * n, 4 * n)),
        fiber_axes=tuple(range(2 * n)),
    )
    check_model(model)
    return model


def with_eta(m: TorusModel, eta: Form) -> TorusModel:
    """Same model carrying a replacement eta; nothing is validated"""
    return TorusModel(m.n, m.triple, m.omega, eta, m.base_axes, m.fiber_axes)


def _points(m: TorusModel, seed: int = 0) -> np.ndarray:
    return evaluation_grid(m.dim, m.active_axes(), sorted(set(m.eta.polynomial_axes())), seed)


def check_model(m: TorusModel, seed: int = 0, tol: float = 1e-9):
    """Raise StructureError unless the fibration is Lagrangian and eta is a real closed semipositive pullback"""
    if not restrict(m.omega, m.fiber_axes).is_zero():
        raise StructureError("fibers are not Lagrangian for Omega")
    if not m.eta.is_real():
        raise StructureError("eta is not real")
    if not ext_d(m.eta).is_zero():
        raise StructureError("eta is not closed")
    fiber = set(m.fiber_axes)
    if any(fiber & set(indices) for indices in m.eta.coeffs) or fiber & set(m.eta.active_axes()):
        raise StructureError("eta has components along or dependence on fiber directions")
    complex_structure = m.triple.I
    for point in _points(m, seed):
        matrix = np.real(matrix_at(m.eta, point))
        # eta(x, Ix) = x^T A I x
        symmetric = 0.5 * (matrix @ complex_structure + (matrix @ complex_structure).T)
        eigenvalues = np.linalg.eigvalsh(symmetric)
        if eigenvalues[0] < -tol * max(1.0, abs(eigenvalues[-1])):
            raise StructureError("eta is not semipositive", point=list(point))
        if rank(symmetric) != 2 * m.n:
            raise StructureError(f"eta has rank {rank(symmetric)}, expected {2 * m.n}", point=list(point))


def power_coefficients(m: TorusModel) -> List[Form]:
    """Coefficient of t^k in (Omega + t eta)^{n+1}: binom(n+1, k) Omega^{n+1-k} ^ eta^k"""
    top = m.n + 1
    return [wedge(power(m.omega, top - k), power(m.eta, k)) * comb(top, k) for k in range(top + 1)]


def verify_power_condition(
    m: TorusModel, ts: Sequence[complex] = DEFAULT_TS, seed: int = 0, tol: float = 1e-9
) -> List[Check]:
    """
    Symbolic check of (Omega + t eta)^{n+1} = 0 plus the rotation certificate of non-degeneracy.

    Raises:
        PowerConditionViolated: on the first non-zero coefficient, with its power of eta
    """
    checks = []
    for k, coefficient in enumerate(power_coefficients(m)):
        if not coefficient.is_zero():
            raise PowerConditionViolated(
                f"coefficient of t^{k} in (Omega + t eta)^{m.n + 1} is not zero",
                p=k,
                form=coefficient,
            )
        checks.append(Check("power_coefficient", 0.0, True, params={"k": k}))
    logger.debug("power condition holds for n=%d", m.n)
    for t in ts:
        residual, smallest = 0.0, np.inf
        for point in _points(m, seed):
            r, s = rotation_certificate(m.triple, matrix_at(m.omega_t(t), point), t)
            residual, smallest = max(residual, r), min(smallest, s)
        passed = residual <= tol and smallest > tol
        witness = None if passed else {"residual": residual, "smallest_singular_value": smallest}
        checks.append(Check("nondegeneracy", residual, passed, t=complex(t), witness=witness))
    return checks


def family_member(m: TorusModel, t: complex, seed: int = 0) -> FamilyMember:
    """(t, Omega_t, I_t) with I_t the kernel structure of Omega_t"""
    omega_t = m.omega_t(t)
    structure = kernel_structure(omega_t, seed=seed, check_power=False)
    return FamilyMember(complex(t), omega_t, structure)


def eta_type_defect(m: TorusModel, member: FamilyMember) -> float:
    """Largest coefficient of eta ^ Omega_t^n and eta ^ conj(Omega_t)^n; zero iff eta is (1,1) for I_t"""
    top = power(member.omega_t, m.n)
    return max(wedge(m.eta, top).max_abs, wedge(m.eta, conjugate_form(top)).max_abs)


def member_checks(m: TorusModel, member: FamilyMember, seed: int = 0, tol: float = 1e-9) -> List[Check]:
    defect = integrability_defect(member.structure, seed)
    eta_type = eta_type_defect(m, member)
    return [
        Check("integrability", defect, defect <= tol, t=member.t),
        Check("eta_type_11", eta_type, eta_type <= tol, t=member.t),
    ]


def fiber_invariance(m: TorusModel, ts: Sequence[complex], seed: int = 0, tol: float = 1e-9) -> List[Check]:
    """
    Compare I_t with I_0 on the fibers and check the projection is complex linear.

    Raises:
        FiberDriftError: when some t deviates by more than tol
    """
    fiber, base = list(m.fiber_axes), list(m.base_axes)
    reference = family_member(m, 0, seed).structure
    checks = []
    for t in sorted(ts, key=lambda value: (value.real, value.imag)):
        current = family_member(m, t, seed).structure
        deviation, witness = 0.0, None
        for point in _points(m, seed):
            I_t, I_0 = current.matrix_at(point), reference.matrix_at(point)
            blocks = (
                I_t[np.ix_(fiber, fiber)] - I_0[np.ix_(fiber, fiber)],
                I_t[np.ix_(base, fiber)],
                I_t[np.ix_(base, base)] - I_0[np.ix_(base, base)],
            )
            value = max(float(np.max(np.abs(block))) for block in blocks)
            if value > deviation:
                deviation, witness = value, {"point": list(point)}
        if deviation > tol:
            raise FiberDriftError(
                f"I_t drifts from I_0 on the fibers by {deviation:.3e}",
                t=complex(t),
                deviation=deviation,
                **witness,
            )
        checks.append(Check("fiber_invariance", deviation, True, t=complex(t)))
    return checks


def composition_defect(m: TorusModel, t: complex, s: complex, seed: int = 0) -> float:
    """I_{t+s} from Omega + (t+s) eta against the kernel of (Omega + t eta) + s eta"""
    direct = family_member(m, t + s, seed).structure
    rebased = kernel_structure(m.omega_t(t) + m.eta * complex(s), seed=seed, check_power=False)
    return structure_distance(direct, rebased, _points(m, seed))


def holomorphy_defect(m: TorusModel, t: complex, seed: int = 0, step: float = HOLOMORPHY_STEP) -> float:
    """max |(d I_t / d tbar) P01_t| by central differences"""
    t = complex(t)

    def at(value: complex, point) -> np.ndarray:
        return family_member(m, value, seed).structure.matrix_at(point)

    defect = 0.0
    for point in _points(m, seed):
        d_re = (at(t + step, point) - at(t - step, point)) / (2 * step)
        d_im = (at(t + 1j * step, point) - at(t - 1j * step, point)) / (2 * step)
        d_tbar = 0.5 * (d_re + 1j * d_im)
        _, p01 = family_member(m, t, seed).structure.projectors_at(point)
        defect = max(defect, float(np.max(np.abs(d_tbar @ p01))))
    return defect


def eta_rank(m: TorusModel, member: FamilyMember, seed: int = 0) -> int:
    """Real rank of eta as a semipositive (1,1)-form for I_t, maximized over the grid"""
    return max(
        semipositive_rank(point_form(m.eta, member.structure, point)).rank for point in _points(m, seed)
    )


# lifted total space


def lifted_form(m: TorusModel) -> Form:
    """
    Omega + t eta + dt ^ dw on T^{4n} x C^2.

    The t-plane takes real axes 4n, 4n+1 and the w-plane 4n+2, 4n+3.
    """
    dim = m.dim + 4
    t = FourierScalar.coordinate(dim, m.dim) + FourierScalar.coordinate(dim, m.dim + 1) * 1j
    base = lift(m.omega, dim) + lift(m.eta, dim) * t
    return base + wedge(Form.dz(dim, 2 * m.n), Form.dz(dim, 2 * m.n + 1))


def _lift_failure(stage: str, error: TwistorForgeError) -> LiftError:
    return LiftError(f"lifted form fails at stage {stage}: {error}", stage=stage, **error.details)


def lifted_form_certificate(m: TorusModel, seed: int = 0, tol: float = 1e-10) -> List[Check]:
    """
    Certify the lifted structure on T^{4n} x C^2.

    Stages: non-degeneracy of the lifted form, d(lifted) = eta ^ dt exactly,
    pure (2,1) type of the differential, and agreement with I_t + I_C on slices.

    Raises:
        LiftError: tagged with the failing stage
    """
    lifted = lifted_form(m)
    dim = lifted.dim
    try:
        structure = kernel_structure(lifted, seed=seed)
    except (NotNonDegenerate, PowerConditionViolated) as error:
        raise _lift_failure("nondegenerate", error) from error
    checks = [Check("lift_nondegenerate", 0.0, True)]

    d_lifted = ext_d(lifted)
    expected = wedge(lift(m.eta, dim), Form.dz(dim, 2 * m.n))
    difference = d_lifted.max_difference(expected)
    if d_lifted != expected:
        raise LiftError("d of the lifted form is not eta ^ dt", stage="differential", max_defect=difference)
    checks.append(Check("lift_differential", difference, True))

    impure = 0.0
    grid = structure.grid(seed)
    others = [(r, 3 - r) for r in range(4) if r != 2]
    for point in grid:
        impure = max(impure, type_norm(d_lifted, structure, others, point))
    if impure > tol:
        raise LiftError(
            f"d of the lifted form has a non-(2,1) part of size {impure:.3e}", stage="type", max_defect=impure
        )
    checks.append(Check("lift_type_21", impure, True))

    drift, witness = 0.0, None
    base = list(range(m.dim))
    extra = list(range(m.dim, dim))
    for point in grid:
        t = complex(point[m.dim], point[m.dim + 1])
        matrix = structure.matrix_at(point)
        member = family_member(m, t, seed).structure.matrix_at(point[: m.dim])
        value = max(
            float(np.max(np.abs(matrix[np.ix_(base, base)] - member))),
            float(np.max(np.abs(matrix[np.ix_(base, extra)]))),
            float(np.max(np.abs(matrix[np.ix_(extra, base)]))),
            float(np.max(np.abs(matrix[np.ix_(extra, extra)] - standard_matrix(4)))),
        )
        if value > drift:
            drift, witness = value, {"point": list(point)}
    if drift > tol:
        raise LiftError(f"lifted structure differs from I_t + I_C by {drift:.3e}", stage="slices", **witness)
    checks.append(Check("lift_slices", drift, True))
    return checks


def lifted_structure(m: TorusModel, seed: int = 0) -> ComplexStructureField:
    return kernel_structure(lifted_form(m), seed=seed)


# periods


def period_plane(m: TorusModel) -> Plane:
    """
    The (+,+,0) plane spanned by Re[Omega], Im[Omega], [eta] in the lattice of 2-forms on T^4.

    The frame is scaled so that degenerate_twistor_line(plane, t) is the class of Omega + t eta.
    """
    if m.n != 1:
        raise RangeError("period planes are built on the 4-torus only", n=m.n)
    space = torus_lattice().space
    omega, eta = cohomology_class(m.omega), cohomology_class(m.eta)
    scale = float(np.sqrt(space.q(omega.real, omega.real)))
    frame = np.stack([omega.real, omega.imag, eta.real]) / scale
    return plane_from_frame(space, frame)


def family_period(m: TorusModel, t: complex) -> PeriodPoint:
    """Normalized period of Omega_t"""
    if m.n != 1:
        raise RangeError("family periods are computed on the 4-torus only", n=m.n)
    space = torus_lattice().space
    return PeriodPoint(space, canonical_representative(cohomology_class(m.omega_t(t))))


SWEEP_BASE_SHIFT = 1.0


def sweep_member(
    m: TorusModel,
    t: complex,
    seed: int = 0,
    tol: float = 1e-9,
    composition_tol: float = 1e-10,
    holomorphy_tol: float = 1e-6,
) -> List[Check]:
    """Per-t checks of a family sweep"""
    member = family_member(m, t, seed)
    checks = member_checks(m, member, seed, tol)
    composition = composition_defect(m, t, SWEEP_BASE_SHIFT, seed)
    checks.append(Check("composition", composition, composition <= composition_tol, t=member.t))
    holomorphy = holomorphy_defect(m, t, seed)
    checks.append(Check("holomorphy", holomorphy, holomorphy <= holomorphy_tol, t=member.t))
    found = eta_rank(m, member, seed)
    checks.append(
        Check("eta_rank", float(abs(found - 2 * m.n)), found == 2 * m.n, t=member.t, params={"rank": found})
    )
    return checks
