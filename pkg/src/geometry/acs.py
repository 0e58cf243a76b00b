"""Almost complex structures: reconstruction, 2-form kernels, integrability, hyperkähler triples"""

import logging
from typing import Sequence, Tuple

import numpy as np

from ..errors import PowerConditionViolated, RankError, RealKernelError, SphereError, StructureError
from ..models.form import Form, VectorField
from ..models.structure import (
    BundleStructureField,
    ComplexStructureField,
    FourierStructureField,
    HyperkahlerTriple,
    KernelStructureField,
    SubBundleBasis,
    complex_frame,
)
from ..utils.numerics import RANK_TOL, evaluation_grid, rank
from .exterior import ext_d, power, type_norm

logger = logging.getLogger(__name__)

SPHERE_TOL = 1e-12

# one quaternionic block on local axes (x1, x2, x3, x4)
_BLOCK_I = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
_BLOCK_J = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
_BLOCK_K = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)


def standard_matrix(dim: int) -> np.ndarray:
    """Standard I: d/dx_{2j} -> d/dx_{2j+1}"""
    matrix = np.zeros((dim, dim))
    for j in range(dim // 2):
        matrix[2 * j + 1, 2 * j] = 1.0
        matrix[2 * j, 2 * j + 1] = -1.0
    return matrix


def standard_structure(dim: int) -> FourierStructureField:
    return FourierStructureField.constant(standard_matrix(dim))


def standard_triple(n: int) -> HyperkahlerTriple:
    """Flat triple on R^{4n}; block j acts on the real axes of (z_j, z_{n+j})"""
    dim = 4 * n
    matrices = [np.zeros((dim, dim)) for _ in range(3)]
    for j in range(n):
        axes = [2 * j, 2 * j + 1, 2 * (n + j), 2 * (n + j) + 1]
        for matrix, block in zip(matrices, (_BLOCK_I, _BLOCK_J, _BLOCK_K)):
            matrix[np.ix_(axes, axes)] = block
    return HyperkahlerTriple(*matrices, g=np.eye(dim))


def random_triple(n: int, seed: int = 0) -> HyperkahlerTriple:
    """GL-conjugate of the standard triple with the transported metric"""
    rng = np.random.default_rng([seed, n])
    dim = 4 * n
    orthogonal, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    A = orthogonal * rng.uniform(0.5, 2.0, dim)
    inverse = np.linalg.inv(A)
    base = standard_triple(n)
    conjugate = [A @ M @ inverse for M in (base.I, base.J, base.K)]
    metric = inverse.T @ base.g @ inverse
    return HyperkahlerTriple(*conjugate, g=0.5 * (metric + metric.T))


def holomorphic_form(h: HyperkahlerTriple) -> Form:
    """omega_J + i omega_K"""
    return Form.from_matrix(h.form_matrix(h.J) + 1j * h.form_matrix(h.K))


def antiholomorphic_bundle(J: ComplexStructureField) -> SubBundleBasis:
    """
    The -i eigenbundle spanned by (0,1)-projections (Id + iJ)/2 e_a of coordinate vectors.

    Args:
        J: A constant structure, or one with Fourier matrix entries

    Returns:
        SubBundleBasis of rank dim/2
    """
    origin = np.zeros(J.dim)
    frame = complex_frame(J.matrix_at(origin))
    half = J.dim // 2
    projector = 0.5 * (np.eye(J.dim) + 1j * J.matrix_at(origin))
    axes = [
        next(a for a in range(J.dim) if np.allclose(projector[:, a], frame[:, half + k]))
        for k in range(half)
    ]
    if J.is_constant():
        return SubBundleBasis.constant([projector[:, a] for a in axes])
    if not isinstance(J, FourierStructureField):
        raise StructureError("only constant or Fourier structures have an exact (0,1)-frame")
    fields = []
    for a in axes:
        components = tuple(
            J.entries[b][a] * 0.5j + (0.5 if a == b else 0.0) for b in range(J.dim)
        )
        fields.append(VectorField(J.dim, components))
    return SubBundleBasis(J.dim, half, tuple(fields))


def structure_from_antiholomorphic(
    T01: SubBundleBasis, seed: int = 0, rcond: float = RANK_TOL
) -> BundleStructureField:
    """Structure with T01 as its -i eigenbundle"""
    if 2 * T01.rank != T01.dim:
        raise RankError(f"rank {T01.rank} bundle on a {T01.dim}-dimensional torus")
    grid = evaluation_grid(T01.dim, T01.active_axes(), T01.planar_axes(), seed)
    for point in grid:
        values = T01.values_at(point)
        if rank(values, rcond) != T01.rank:
            raise RankError("basis is pointwise dependent", point=list(point))
        stacked = np.hstack([values.real, values.imag])
        if rank(stacked, rcond) != 2 * T01.rank:
            raise RealKernelError("sub-bundle meets the real tangent bundle", point=list(point))
    return BundleStructureField(T01)


def kernel_structure(
    omega: Form, seed: int = 0, check_power: bool = True, rcond: float = RANK_TOL
) -> KernelStructureField:
    """
    Structure with T^{0,1} = {v : omega(v, .) = 0}.

    Args:
        omega: 2-form on a torus of dimension 4n
        seed: Seed of the random part of the evaluation grid
        check_power: Also verify omega^{n+1} = 0 symbolically

    Returns:
        KernelStructureField, checked on the evaluation grid
    """
    field = KernelStructureField(omega, rcond=rcond)
    if check_power and omega.dim % 4 == 0:
        top = power(omega, omega.dim // 4 + 1)
        if not top.is_zero():
            raise PowerConditionViolated(
                "omega^{n+1} is not zero",
                p=omega.dim // 4 + 1,
                form=top,
            )
    for point in field.grid(seed):
        field.matrix_at(point)
    logger.debug("kernel structure built on %d grid points", len(field.grid(seed)))
    return field


def integrability_defect(J: ComplexStructureField, seed: int = 0) -> float:
    """
    Max |(1,0)-part of [Y_a, Y_b]| / (|Y_a| |Y_b|) over (0,1)-projected coordinate fields.

    Brackets use exact derivatives of J: [Y_a, Y_b] = (i/2)(DJ(Y_a) e_b - DJ(Y_b) e_a).
    """
    active = J.active_axes()
    if not active:
        return 0.0
    defect = 0.0
    for point in J.grid(seed):
        p10, p01 = J.projectors_at(point)
        derivatives = {c: J.derivative_at(point, c) for c in active}
        norms = np.linalg.norm(p01, axis=0)
        directional = [
            sum(p01[c, a] * derivatives[c] for c in active) for a in range(J.dim)
        ]
        for a in range(J.dim):
            if norms[a] < 1e-12:
                continue
            for b in range(a + 1, J.dim):
                if norms[b] < 1e-12:
                    continue
                bracket = 0.5j * (directional[a][:, b] - directional[b][:, a])
                value = np.max(np.abs(p10 @ bracket)) / (norms[a] * norms[b])
                defect = max(defect, float(value))
    return defect


def cartan_defect(omega: Form, J: ComplexStructureField, seed: int = 0) -> float:
    """Max norm of the (0,3) + (1,2) components of d(omega) over the grid"""
    d_omega = ext_d(omega)
    if d_omega.is_zero():
        return 0.0
    axes = sorted(set(d_omega.active_axes()) | set(J.active_axes()))
    planar = sorted(set(d_omega.polynomial_axes()) | set(J.planar_axes()))
    defect = 0.0
    for point in evaluation_grid(J.dim, axes, planar, seed):
        defect = max(defect, type_norm(d_omega, J, [(0, 3), (1, 2)], point))
    return defect


def _sphere(a: float, b: float, c: float):
    if abs(a * a + b * b + c * c - 1.0) > SPHERE_TOL:
        raise SphereError(f"({a}, {b}, {c}) is off the unit sphere", coefficients=[a, b, c])


def induced_structure(h: HyperkahlerTriple, a: float, b: float, c: float) -> FourierStructureField:
    """aI + bJ + cK"""
    _sphere(a, b, c)
    return FourierStructureField.constant(h.combination(a, b, c))


def hermitian_form(h: HyperkahlerTriple, a: float, b: float, c: float) -> Form:
    """omega_L = g(L., .) for L = aI + bJ + cK"""
    _sphere(a, b, c)
    return Form.from_matrix(h.form_matrix(h.combination(a, b, c)))


def rotation_certificate(h: HyperkahlerTriple, omega_t: np.ndarray, t: complex) -> Tuple[float, float]:
    """
    Non-degeneracy witness for Omega + t eta with eta real.

    With v = |t|/t, Im(v Omega_t) equals the Hermitian form of
    L = Im(v) J + Re(v) K, which is non-degenerate.

    Returns:
        (max residual of the identity, smallest singular value of Im(v Omega_t))
    """
    v = 1.0 + 0j if t == 0 else abs(t) / t
    L = v.imag * h.J + v.real * h.K
    rotated = np.imag(v * omega_t)
    residual = float(np.max(np.abs(rotated - h.form_matrix(L))))
    smallest = float(np.linalg.svd(rotated, compute_uv=False)[-1])
    return residual, smallest


def structure_distance(a: ComplexStructureField, b: ComplexStructureField, points: Sequence[Sequence[float]]) -> float:
    """Max entry difference of two structures over points"""
    return max(float(np.max(np.abs(a.matrix_at(p) - b.matrix_at(p)))) for p in points)
