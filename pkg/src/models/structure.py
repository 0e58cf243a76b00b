"""Almost complex structure fields, sub-bundle bases and hyperkähler triples"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from threading import Lock
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    DimensionError,
    NotNonDegenerate,
    PowerConditionViolated,
    RankError,
    StructureError,
)
from ..utils.numerics import RANK_TOL, evaluation_grid, null_space, rank, real_kernel
from .form import Form, VectorField
from .fourier import FourierScalar


def complex_frame(matrix: np.ndarray) -> np.ndarray:
    """
    Frame [U, conj(U)] of C^d with U spanning the +i eigenspace of J.

    U is built from the (1,0)-projections of the coordinate vectors, so for the
    standard structure its columns are exactly d/dz_j.
    """
    dim = matrix.shape[0]
    half = dim // 2
    projector = 0.5 * (np.eye(dim) - 1j * matrix)
    columns: List[np.ndarray] = []
    for axis in range(dim):
        candidate = projector[:, axis]
        trial = np.column_stack(columns + [candidate])
        if rank(trial) == len(columns) + 1:
            columns.append(candidate)
        if len(columns) == half:
            break
    if len(columns) != half:
        raise StructureError("+i eigenspace has the wrong dimension", found=len(columns))
    frame = np.column_stack(columns)
    return np.hstack([frame, frame.conj()])


def _eigen_matrix(basis01: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """J = P diag(i, -i) P^-1 with P = [conj(B), B]; returns (J, P, D)"""
    half = basis01.shape[1]
    P = np.hstack([basis01.conj(), basis01])
    D = np.diag(np.concatenate([np.full(half, 1j), np.full(half, -1j)]))
    return P @ D @ np.linalg.inv(P), P, D


class ComplexStructureField(ABC):
    """Pointwise endomorphism J of the tangent bundle with J^2 = -Id"""

    dim: int

    @abstractmethod
    def matrix_at(self, point: Sequence[float]) -> np.ndarray:
        """Real d x d matrix of J at a point"""
        pass

    @abstractmethod
    def derivative_at(self, point: Sequence[float], axis: int) -> np.ndarray:
        """Partial derivative of the matrix of J along one axis"""
        pass

    @abstractmethod
    def active_axes(self) -> List[int]:
        pass

    def planar_axes(self) -> List[int]:
        return []

    def is_constant(self) -> bool:
        return not self.active_axes()

    def grid(self, seed: int = 0) -> np.ndarray:
        return evaluation_grid(self.dim, self.active_axes(), self.planar_axes(), seed)

    def check_matrix(self, matrix: np.ndarray, tol: float = 1e-9, point: Optional[Sequence[float]] = None):
        error = float(np.max(np.abs(matrix @ matrix + np.eye(self.dim))))
        if error > tol:
            raise StructureError(
                f"J^2 + Id has entries up to {error:.3e}",
                point=None if point is None else list(point),
                error=error,
            )

    def validate(self, seed: int = 0, tol: float = 1e-9) -> "ComplexStructureField":
        for point in self.grid(seed):
            self.check_matrix(self.matrix_at(point), tol, point=point)
        return self

    def projectors_at(self, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        """(P10, P01) = ((Id - iJ)/2, (Id + iJ)/2)"""
        matrix = self.matrix_at(point)
        identity = np.eye(self.dim)
        return 0.5 * (identity - 1j * matrix), 0.5 * (identity + 1j * matrix)


@dataclass(frozen=True, eq=False)
class FourierStructureField(ComplexStructureField):
    """Structure whose matrix entries are real trigonometric polynomials"""
    dim: int
    entries: Tuple[Tuple[FourierScalar, ...], ...]

    def __post_init__(self):
        if self.dim % 2:
            raise DimensionError(f"almost complex structures need even dimension, got {self.dim}")
        if len(self.entries) != self.dim or any(len(row) != self.dim for row in self.entries):
            raise DimensionError("structure matrix has the wrong shape")
        for row in self.entries:
            for entry in row:
                if not entry.is_real():
                    raise StructureError("structure matrix entries must be real functions")

    @classmethod
    def constant(cls, matrix: np.ndarray) -> "FourierStructureField":
        matrix = np.asarray(matrix, dtype=float)
        dim = matrix.shape[0]
        return cls(
            dim,
            tuple(tuple(FourierScalar.constant(dim, matrix[a, b]) for b in range(dim)) for a in range(dim)),
        )

    def matrix_at(self, point: Sequence[float]) -> np.ndarray:
        values = np.array([[entry(point) for entry in row] for row in self.entries])
        return values.real

    def derivative_at(self, point: Sequence[float], axis: int) -> np.ndarray:
        values = np.array([[entry.derivative(axis)(point) for entry in row] for row in self.entries])
        return values.real

    def active_axes(self) -> List[int]:
        axes = set()
        for row in self.entries:
            for entry in row:
                axes.update(entry.active_axes())
        return sorted(axes)

    def planar_axes(self) -> List[int]:
        axes = set()
        for row in self.entries:
            for entry in row:
                axes.update(entry.polynomial_axes())
        return sorted(axes)


def _form_matrix(form: Form, point: Sequence[float]) -> np.ndarray:
    matrix = np.zeros((form.dim, form.dim), dtype=complex)
    for (i, j), coeff in form.coeffs.items():
        value = coeff(point)
        matrix[i, j] = value
        matrix[j, i] = -value
    return matrix


@dataclass(frozen=True, eq=False)
class KernelStructureField(ComplexStructureField):
    """
    Structure whose (0,1)-bundle is the kernel of a complex 2-form.

    Raises NotNonDegenerate when the form has a real kernel vector and
    PowerConditionViolated when the kernel is not half-dimensional.
    """
    form: Form
    rcond: float = RANK_TOL
    _cache: Dict[Tuple[float, ...], Tuple[np.ndarray, np.ndarray, np.ndarray]] = field(
        default_factory=dict, repr=False
    )
    _lock: Lock = field(default_factory=Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.form.degree != 2:
            raise DimensionError(f"kernel structures need a 2-form, got degree {self.form.degree}")
        if self.form.dim % 2:
            raise DimensionError(f"odd dimension {self.form.dim}")

    @property
    def dim(self) -> int:
        return self.form.dim

    def kernel_at(self, point: Sequence[float]) -> np.ndarray:
        """Orthonormal basis of {v : form(v, .) = 0} at a point"""
        return self._solve(point)[1]

    def _solve(self, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(form matrix, kernel basis, J) at a point"""
        key = tuple(float(x) for x in point)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        matrix = _form_matrix(self.form, point)
        real = real_kernel(matrix, self.rcond)
        if real.shape[1]:
            raise NotNonDegenerate(
                "2-form has a real kernel vector",
                point=list(key),
                vector=real[:, 0],
            )
        kernel = null_space(matrix, self.rcond)
        if kernel.shape[1] != self.dim // 2:
            raise PowerConditionViolated(
                f"kernel has dimension {kernel.shape[1]}, expected {self.dim // 2}",
                point=list(key),
                kernel_dimension=kernel.shape[1],
            )
        J, _, _ = _eigen_matrix(kernel)
        with self._lock:
            return self._cache.setdefault(key, (matrix, kernel, J.real))

    def matrix_at(self, point: Sequence[float]) -> np.ndarray:
        return self._solve(point)[2]

    def derivative_at(self, point: Sequence[float], axis: int) -> np.ndarray:
        """Implicit derivative from M J = R with M = [A; conj A], R = [iA; -i conj A]"""
        matrix, _, J = self._solve(point)
        derivative = _form_matrix(self.form.map_coefficients(lambda f: f.derivative(axis)), point)
        M = np.vstack([matrix, matrix.conj()])
        dM = np.vstack([derivative, derivative.conj()])
        dR = np.vstack([1j * derivative, -1j * derivative.conj()])
        return (np.linalg.pinv(M) @ (dR - dM @ J)).real

    def active_axes(self) -> List[int]:
        return self.form.active_axes()

    def planar_axes(self) -> List[int]:
        return self.form.polynomial_axes()


@dataclass(frozen=True, eq=False)
class SubBundleBasis:
    """Rank-r family of complexified vector fields"""
    dim: int
    rank: int
    basis: Tuple[VectorField, ...]

    def __post_init__(self):
        if len(self.basis) != self.rank:
            raise RankError(f"{len(self.basis)} fields for a rank-{self.rank} bundle")
        if any(v.dim != self.dim for v in self.basis):
            raise DimensionError("basis fields live on different tori")

    @classmethod
    def constant(cls, vectors: Sequence[Sequence[complex]]) -> "SubBundleBasis":
        fields = tuple(VectorField.constant(v) for v in vectors)
        return cls(len(vectors[0]), len(fields), fields)

    def values_at(self, point: Sequence[float]) -> np.ndarray:
        """d x r matrix of basis vectors at a point"""
        return np.column_stack([v.at(point) for v in self.basis])

    def derivative_at(self, point: Sequence[float], axis: int) -> np.ndarray:
        return np.column_stack(
            [np.array([c.derivative(axis)(point) for c in v.components]) for v in self.basis]
        )

    def active_axes(self) -> List[int]:
        axes = set()
        for v in self.basis:
            for c in v.components:
                axes.update(c.active_axes())
        return sorted(axes)

    def planar_axes(self) -> List[int]:
        axes = set()
        for v in self.basis:
            for c in v.components:
                axes.update(c.polynomial_axes())
        return sorted(axes)


@dataclass(frozen=True, eq=False)
class BundleStructureField(ComplexStructureField):
    """Structure with a prescribed (0,1)-bundle"""
    bundle: SubBundleBasis

    @property
    def dim(self) -> int:
        return self.bundle.dim

    def matrix_at(self, point: Sequence[float]) -> np.ndarray:
        J, _, _ = _eigen_matrix(self.bundle.values_at(point))
        return J.real

    def derivative_at(self, point: Sequence[float], axis: int) -> np.ndarray:
        J, P, D = _eigen_matrix(self.bundle.values_at(point))
        db = self.bundle.derivative_at(point, axis)
        dP = np.hstack([db.conj(), db])
        return ((dP @ D - J @ dP) @ np.linalg.inv(P)).real

    def active_axes(self) -> List[int]:
        return self.bundle.active_axes()

    def planar_axes(self) -> List[int]:
        return self.bundle.planar_axes()


@dataclass(frozen=True, eq=False)
class HyperkahlerTriple:
    """Constant quaternionic triple (I, J, K) on R^{4n} with a compatible flat metric g"""
    I: np.ndarray
    J: np.ndarray
    K: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        dim = self.g.shape[0]
        if dim % 4:
            raise DimensionError(f"hyperkähler triples need dimension 4n, got {dim}")
        identity = np.eye(dim)
        scale = max(1.0, float(np.max(np.abs(self.g))))
        checks = {
            "I^2": self.I @ self.I + identity,
            "J^2": self.J @ self.J + identity,
            "K^2": self.K @ self.K + identity,
            "IJK": self.I @ self.J @ self.K + identity,
            "g(I.,I.)": self.I.T @ self.g @ self.I - self.g,
            "g(J.,J.)": self.J.T @ self.g @ self.J - self.g,
            "g(K.,K.)": self.K.T @ self.g @ self.K - self.g,
            "g symmetric": self.g - self.g.T,
        }
        for name, residual in checks.items():
            if np.max(np.abs(residual)) > 1e-9 * scale:
                raise StructureError(f"triple fails {name}", residual=float(np.max(np.abs(residual))))
        if np.min(np.linalg.eigvalsh(self.g)) <= 0:
            raise StructureError("metric is not positive definite")

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def n(self) -> int:
        return self.dim // 4

    def combination(self, a: float, b: float, c: float) -> np.ndarray:
        return a * self.I + b * self.J + c * self.K

    def form_matrix(self, L: np.ndarray) -> np.ndarray:
        """Matrix of omega_L(u, v) = g(Lu, v)"""
        return L.T @ self.g
