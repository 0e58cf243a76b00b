"""Differential forms and vector fields with Fourier coefficients"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from ..errors import DegreeError, DimensionError
from ..utils.multiindex import Index, sort_with_sign
from .fourier import PRUNE_TOL, FourierScalar, Number

Coefficient = Union[Number, FourierScalar]


@dataclass(frozen=True, eq=False)
class Form:
    """Degree-p complex form on R^dim, stored on strictly increasing index tuples (0-based)"""
    dim: int
    degree: int
    coeffs: Dict[Index, FourierScalar] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= self.dim:
            raise DegreeError(f"degree {self.degree} on a {self.dim}-dimensional torus")
        folded: Dict[Index, FourierScalar] = {}
        for indices, coeff in self.coeffs.items():
            indices = tuple(int(i) for i in indices)
            if len(indices) != self.degree or any(not 0 <= i < self.dim for i in indices):
                raise DimensionError(f"index tuple {indices} for a {self.degree}-form on {self.dim} axes")
            sign, ordered = sort_with_sign(indices)
            if sign == 0:
                continue
            scalar = FourierScalar.lift_constant(coeff, self.dim) * sign
            folded[ordered] = folded[ordered] + scalar if ordered in folded else scalar
        object.__setattr__(
            self, "coeffs", {i: c for i, c in sorted(folded.items()) if not c.is_zero()}
        )

    @classmethod
    def _raw(cls, dim: int, degree: int, coeffs: Dict[Index, FourierScalar]) -> "Form":
        """Build from already canonical increasing keys, dropping zero coefficients"""
        if not 0 <= degree <= dim:
            raise DegreeError(f"degree {degree} on a {dim}-dimensional torus")
        form = object.__new__(cls)
        object.__setattr__(form, "dim", dim)
        object.__setattr__(form, "degree", degree)
        object.__setattr__(
            form, "coeffs", {i: c for i, c in sorted(coeffs.items()) if not c.is_zero()}
        )
        return form

    # constructors

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls(dim, degree)

    @classmethod
    def constant(cls, dim: int, value: Coefficient) -> "Form":
        return cls(dim, 0, {(): value})

    @classmethod
    def basis(cls, dim: int, indices: Sequence[int], coeff: Coefficient = 1.0) -> "Form":
        """coeff * dx_{i1} ^ ... ^ dx_{ip}, indices in any order"""
        return cls(dim, len(indices), {tuple(indices): coeff})

    @classmethod
    def dx(cls, dim: int, axis: int) -> "Form":
        return cls.basis(dim, (axis,))

    @classmethod
    def dz(cls, dim: int, j: int) -> "Form":
        """dz_j = dx_{2j} + i dx_{2j+1} (0-based complex index)"""
        return cls(dim, 1, {(2 * j,): 1.0, (2 * j + 1,): 1j})

    @classmethod
    def dzbar(cls, dim: int, j: int) -> "Form":
        return cls(dim, 1, {(2 * j,): 1.0, (2 * j + 1,): -1j})

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Form":
        """Constant 2-form with Omega(u, v) = u^T A v for antisymmetric A"""
        matrix = np.asarray(matrix)
        dim = matrix.shape[0]
        cutoff = PRUNE_TOL * float(np.max(np.abs(matrix), initial=0.0))
        coeffs = {
            (a, b): complex(matrix[a, b])
            for a in range(dim)
            for b in range(a + 1, dim)
            if abs(matrix[a, b]) > cutoff
        }
        return cls(dim, 2, coeffs)

    # inspection

    def items(self) -> Iterator[Tuple[Index, FourierScalar]]:
        return iter(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.coeffs.values())

    @property
    def max_abs(self) -> float:
        return max((c.max_abs for c in self.coeffs.values()), default=0.0)

    def active_axes(self) -> List[int]:
        axes = set()
        for coeff in self.coeffs.values():
            axes.update(coeff.active_axes())
        return sorted(axes)

    def polynomial_axes(self) -> List[int]:
        axes = set()
        for coeff in self.coeffs.values():
            axes.update(coeff.polynomial_axes())
        return sorted(axes)

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(c.is_real(tol) for c in self.coeffs.values())

    def coefficient(self, indices: Sequence[int]) -> FourierScalar:
        sign, ordered = sort_with_sign(tuple(indices))
        if sign == 0 or ordered not in self.coeffs:
            return FourierScalar.zero(self.dim)
        return self.coeffs[ordered] * sign

    # linear structure

    def _check(self, other: "Form"):
        if self.dim != other.dim:
            raise DimensionError(f"forms on {self.dim} and {other.dim} axes")
        if self.degree != other.degree:
            raise DegreeError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        coeffs = dict(self.coeffs)
        for indices, coeff in other.coeffs.items():
            coeffs[indices] = coeffs[indices] + coeff if indices in coeffs else coeff
        return Form._raw(self.dim, self.degree, coeffs)

    def __neg__(self) -> "Form":
        return Form._raw(self.dim, self.degree, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, factor: Coefficient) -> "Form":
        """Multiplication by a complex number or a scalar function"""
        if isinstance(factor, FourierScalar) and factor.dim != self.dim:
            raise DimensionError(f"scalar on {factor.dim} axes times form on {self.dim} axes")
        return Form._raw(self.dim, self.degree, {i: c * factor for i, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self.coeffs)))

    def max_difference(self, other: "Form") -> float:
        """Largest coefficient difference, a tolerance-friendly equality"""
        diff = self - other
        return diff.max_abs

    def map_coefficients(self, func) -> "Form":
        return Form._raw(self.dim, self.degree, {i: func(c) for i, c in self.coeffs.items()})

    def to_json(self) -> dict:
        """Indices are written 1-based"""
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [
                {"indices": [i + 1 for i in indices], "fourier": coeff.to_json()}
                for indices, coeff in self.coeffs.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Form":
        dim = int(data["dim"])
        coeffs = {
            tuple(i - 1 for i in term["indices"]): FourierScalar.from_json(dim, term["fourier"])
            for term in data["terms"]
        }
        return cls(dim, int(data["degree"]), coeffs)

    def __repr__(self) -> str:
        return f"Form(dim={self.dim}, degree={self.degree}, terms={len(self.coeffs)})"


@dataclass(frozen=True, eq=False)
class VectorField:
    """Complexified tangent vector field with Fourier components"""
    dim: int
    components: Tuple[FourierScalar, ...]

    def __post_init__(self):
        components = tuple(FourierScalar.lift_constant(c, self.dim) for c in self.components)
        if len(components) != self.dim:
            raise DimensionError(f"{len(components)} components for a field on {self.dim} axes")
        object.__setattr__(self, "components", components)

    @classmethod
    def constant(cls, vector: Sequence[Number]) -> "VectorField":
        dim = len(vector)
        return cls(dim, tuple(FourierScalar.constant(dim, v) for v in vector))

    @classmethod
    def d_dx(cls, dim: int, axis: int) -> "VectorField":
        vector = np.zeros(dim, dtype=complex)
        vector[axis] = 1
        return cls.constant(vector)

    @classmethod
    def d_dz(cls, dim: int, j: int) -> "VectorField":
        """d/dz_j = (d/dx - i d/dy) / 2"""
        vector = np.zeros(dim, dtype=complex)
        vector[2 * j], vector[2 * j + 1] = 0.5, -0.5j
        return cls.constant(vector)

    @classmethod
    def d_dzbar(cls, dim: int, j: int) -> "VectorField":
        vector = np.zeros(dim, dtype=complex)
        vector[2 * j], vector[2 * j + 1] = 0.5, 0.5j
        return cls.constant(vector)

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.dim != self.dim:
            raise DimensionError(f"vector fields on {self.dim} and {other.dim} axes")
        return VectorField(self.dim, tuple(a + b for a, b in zip(self.components, other.components)))

    def __mul__(self, factor: Coefficient) -> "VectorField":
        return VectorField(self.dim, tuple(c * factor for c in self.components))

    __rmul__ = __mul__

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other * -1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.dim == other.dim and self.components == other.components

    def __hash__(self):
        return hash((self.dim, self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def at(self, point: Sequence[float]) -> np.ndarray:
        return np.array([c(point) for c in self.components])

    def apply(self, scalar: FourierScalar) -> FourierScalar:
        """Directional derivative X(f)"""
        result = FourierScalar.zero(self.dim)
        for axis, component in enumerate(self.components):
            if component.is_zero():
                continue
            result = result + component * scalar.derivative(axis)
        return result

    def bracket(self, other: "VectorField") -> "VectorField":
        """Lie bracket [X, Y]^b = X(Y^b) - Y(X^b), exact"""
        if other.dim != self.dim:
            raise DimensionError(f"vector fields on {self.dim} and {other.dim} axes")
        return VectorField(
            self.dim,
            tuple(self.apply(y) - other.apply(x) for x, y in zip(self.components, other.components)),
        )
