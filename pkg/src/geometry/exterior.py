"""Exact exterior calculus for forms with trigonometric-polynomial coefficients"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegreeError, DimensionError, StructureError
from ..models.form import Form, VectorField
from ..models.fourier import FourierScalar, Key
from ..models.structure import ComplexStructureField, complex_frame
from ..utils.multiindex import Index, increasing, merge, sort_with_sign
from ..utils.numerics import compound

Bidegree = Tuple[int, int]


def _same_dim(a: Form, b: Form):
    if a.dim != b.dim:
        raise DimensionError(f"forms on {a.dim} and {b.dim} axes", left=a.dim, right=b.dim)


def wedge(a: Form, b: Form) -> Form:
    """Exterior product, exact in the coefficients"""
    _same_dim(a, b)
    degree = a.degree + b.degree
    if degree > a.dim:
        return Form.zero(a.dim, a.dim)
    coeffs: Dict[Index, FourierScalar] = {}
    for left, f in a.coeffs.items():
        for right, g in b.coeffs.items():
            sign, merged = merge(left, right)
            if sign == 0:
                continue
            term = f * g if sign > 0 else -(f * g)
            coeffs[merged] = coeffs[merged] + term if merged in coeffs else term
    return Form._raw(a.dim, degree, coeffs)


def power(a: Form, k: int) -> Form:
    """k-fold wedge power; power(a, 0) is the constant 1"""
    if k < 0:
        raise DegreeError(f"negative power {k}")
    result = Form.constant(a.dim, 1.0)
    for _ in range(k):
        result = wedge(result, a)
        if result.is_zero():
            return Form.zero(a.dim, min(a.degree * k, a.dim))
    return result


def contract(a: Form, v: VectorField) -> Form:
    """Interior product a(v, ...)"""
    if a.degree == 0:
        raise DegreeError("cannot contract a function with a vector field")
    if a.dim != v.dim:
        raise DimensionError(f"form on {a.dim} axes, vector field on {v.dim} axes")
    coeffs: Dict[Index, FourierScalar] = {}
    for indices, f in a.coeffs.items():
        for position, axis in enumerate(indices):
            component = v.components[axis]
            if component.is_zero():
                continue
            rest = indices[:position] + indices[position + 1:]
            term = f * component
            if position % 2:
                term = -term
            coeffs[rest] = coeffs[rest] + term if rest in coeffs else term
    return Form._raw(a.dim, a.degree - 1, coeffs)


def ext_d(a: Form) -> Form:
    """de Rham differential via exact Fourier differentiation"""
    if a.degree == a.dim:
        return Form.zero(a.dim, a.dim)
    coeffs: Dict[Index, FourierScalar] = {}
    for indices, f in a.coeffs.items():
        for axis in f.active_axes():
            sign, merged = merge((axis,), indices)
            if sign == 0:
                continue
            term = f.derivative(axis)
            if sign < 0:
                term = -term
            coeffs[merged] = coeffs[merged] + term if merged in coeffs else term
    return Form._raw(a.dim, a.degree + 1, coeffs)


def conjugate(a: Form) -> Form:
    return a.map_coefficients(FourierScalar.conjugate)


def real_part(a: Form) -> Form:
    return a.map_coefficients(FourierScalar.real_part)


def imag_part(a: Form) -> Form:
    return a.map_coefficients(FourierScalar.imag_part)


def restrict(a: Form, axes: Sequence[int]) -> Form:
    """Pullback to the coordinate subtorus spanned by `axes` (in the given order)"""
    axes = list(axes)
    position = {axis: k for k, axis in enumerate(axes)}
    coeffs: Dict[Index, FourierScalar] = {}
    for indices, f in a.coeffs.items():
        if any(i not in position for i in indices):
            continue
        sign, local = sort_with_sign(tuple(position[i] for i in indices))
        term = f.restrict(axes) * sign
        coeffs[local] = coeffs[local] + term if local in coeffs else term
    return Form._raw(len(axes), a.degree, coeffs)


def lift(a: Form, dim: int) -> Form:
    """Pullback along the projection onto the first a.dim axes"""
    return Form._raw(dim, a.degree, {i: f.lift(dim) for i, f in a.coeffs.items()})


def cohomology_class(a: Form) -> np.ndarray:
    """Zero-mode coefficient of each increasing index tuple"""
    return np.array(
        [a.coeffs[i].constant_term() if i in a.coeffs else 0j for i in increasing(a.dim, a.degree)]
    )


def integrate(a: Form) -> complex:
    """Integral over the torus fundamental class"""
    if a.degree != a.dim:
        raise DegreeError(f"only top-degree forms integrate, got degree {a.degree}")
    top = tuple(range(a.dim))
    return a.coeffs[top].constant_term() if top in a.coeffs else 0j


def coefficient_vector(a: Form, point: Optional[Sequence[float]] = None) -> np.ndarray:
    """Coefficients at a point, ordered over increasing index tuples"""
    if point is None:
        return cohomology_class(a) if a.is_constant() else _needs_point(a)
    return np.array(
        [a.coeffs[i](point) if i in a.coeffs else 0j for i in increasing(a.dim, a.degree)]
    )


def _needs_point(a: Form):
    raise StructureError(f"{a!r} has non-constant coefficients; pass a point")


def from_coefficient_vector(dim: int, degree: int, vector: np.ndarray) -> Form:
    vector = _clean(vector, vector)
    coeffs = {
        indices: FourierScalar.constant(dim, value)
        for indices, value in zip(increasing(dim, degree), vector)
        if value != 0
    }
    return Form._raw(dim, degree, coeffs)


def matrix_at(a: Form, point: Optional[Sequence[float]] = None) -> np.ndarray:
    """Antisymmetric A with a(u, v) = u^T A v"""
    if a.degree != 2:
        raise DegreeError(f"matrix_at needs a 2-form, got degree {a.degree}")
    point = np.zeros(a.dim) if point is None else point
    matrix = np.zeros((a.dim, a.dim), dtype=complex)
    for (i, j), f in a.coeffs.items():
        value = f(point)
        matrix[i, j] = value
        matrix[j, i] = -value
    return matrix


def evaluate(a: Form, vectors: Sequence[Sequence[complex]], point: Optional[Sequence[float]] = None) -> complex:
    """a(v_1, ..., v_p) with the determinant convention"""
    if len(vectors) != a.degree:
        raise DegreeError(f"{len(vectors)} vectors for a {a.degree}-form")
    point = np.zeros(a.dim) if point is None else point
    if a.degree == 0:
        return a.coeffs[()](point) if () in a.coeffs else 0j
    columns = np.stack([np.asarray(v, dtype=complex) for v in vectors], axis=1)
    total = 0j
    for indices, f in a.coeffs.items():
        total += f(point) * np.linalg.det(columns[list(indices)])
    return complex(total)


def _type_projectors(matrix: np.ndarray, degree: int) -> Dict[Bidegree, np.ndarray]:
    """Linear maps on coefficient vectors extracting each (r, s) component"""
    frame = complex_frame(matrix)
    half = matrix.shape[0] // 2
    inverse = np.linalg.inv(frame)
    forward = compound(frame, degree).T
    backward = compound(inverse, degree).T
    projectors = {}
    types = [sum(1 for k in subset if k < half) for subset in increasing(matrix.shape[0], degree)]
    for r in range(max(0, degree - half), min(degree, half) + 1):
        mask = np.array([t == r for t in types], dtype=float)
        projectors[(r, degree - r)] = backward @ (mask[:, None] * forward)
    return projectors


def hodge_components(
    a: Form,
    J: ComplexStructureField,
    point: Optional[Sequence[float]] = None,
    tol: float = 1e-9,
) -> Dict[Bidegree, Form]:
    """
    Split a form into (r, s) components with respect to J.

    For a constant J the split is exact on every Fourier mode. Otherwise the
    components are computed at `point` and returned as constant forms.
    """
    if a.dim != J.dim:
        raise DimensionError(f"form on {a.dim} axes, structure on {J.dim} axes")
    if J.is_constant():
        matrix = J.matrix_at(np.zeros(J.dim))
        J.check_matrix(matrix, tol)
        projectors = _type_projectors(matrix, a.degree)
        modes: Dict[Key, np.ndarray] = {}
        order = {indices: k for k, indices in enumerate(increasing(a.dim, a.degree))}
        for indices, f in a.coeffs.items():
            for key, value in f.terms.items():
                vector = modes.setdefault(key, np.zeros(len(order), dtype=complex))
                vector[order[indices]] += value
        components = {}
        for bidegree, projector in projectors.items():
            coeffs: Dict[Index, Dict[Key, complex]] = {}
            for key, vector in modes.items():
                projected = projector @ vector
                for indices, k in order.items():
                    if projected[k] != 0:
                        coeffs.setdefault(indices, {})[key] = projected[k]
            components[bidegree] = Form._raw(
                a.dim,
                a.degree,
                {i: FourierScalar._raw(a.dim, t, a.max_abs) for i, t in coeffs.items()},
            )
        return components
    if point is None:
        raise StructureError("structure varies over the torus; hodge_components needs a point")
    matrix = J.matrix_at(point)
    J.check_matrix(matrix, tol, point=point)
    vector = coefficient_vector(a, point)
    return {
        bidegree: from_coefficient_vector(a.dim, a.degree, _clean(projector @ vector, vector))
        for bidegree, projector in _type_projectors(matrix, a.degree).items()
    }


def _clean(projected: np.ndarray, reference: np.ndarray) -> np.ndarray:
    cutoff = 1e-12 * float(np.max(np.abs(reference), initial=0.0))
    return np.where(np.abs(projected) > cutoff, projected, 0)


def type_norm(
    a: Form, J: ComplexStructureField, bidegrees: Sequence[Bidegree], point: Sequence[float]
) -> float:
    """Largest coefficient of the listed (r, s) components at one point"""
    if J.is_constant():
        components = {b: _at_point(form, point) for b, form in hodge_components(a, J).items()}
    else:
        components = hodge_components(a, J, point=point)
    return max((components[b].max_abs for b in bidegrees if b in components), default=0.0)


def _at_point(form: Form, point: Sequence[float]) -> Form:
    return from_coefficient_vector(form.dim, form.degree, coefficient_vector(form, point))


def bidegree_of(a: Form, J: ComplexStructureField, point: Optional[Sequence[float]] = None,
                tol: float = 1e-10) -> List[Bidegree]:
    """The (r, s) types carrying a non-negligible part of the form"""
    components = hodge_components(a, J, point=point)
    scale = a.max_abs
    return sorted(b for b, form in components.items() if form.max_abs > tol * scale)