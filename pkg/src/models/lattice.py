"""Quadratic spaces and abstract Fujiki rings"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import DimensionError, RangeError, StructureError


@dataclass(frozen=True, eq=False)
class QuadraticSpace:
    """H^2 with a symmetric bilinear form q given by its Gram matrix"""
    gram: np.ndarray
    name: str = ""

    def __post_init__(self):
        gram = np.asarray(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
            raise DimensionError(f"Gram matrix of shape {gram.shape}")
        if np.max(np.abs(gram - gram.T), initial=0.0) > 0:
            raise StructureError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", gram)

    @property
    def b(self) -> int:
        return self.gram.shape[0]

    def q(self, u, v):
        """Bilinear (not sesquilinear) extension to complex vectors"""
        value = np.asarray(u) @ self.gram @ np.asarray(v)
        return complex(value) if np.iscomplexobj(value) else float(value)

    def hermitian(self, u, v) -> complex:
        """q(u, conj v)"""
        return complex(np.asarray(u) @ self.gram @ np.conj(np.asarray(v)))

    def signature(self, tol: float = 1e-10) -> Tuple[int, int, int]:
        """(positive, null, negative) eigenvalue counts"""
        return signature_of(self.gram, tol)


def signature_of(matrix: np.ndarray, tol: float = 1e-10) -> Tuple[int, int, int]:
    eigenvalues = np.linalg.eigvalsh(matrix)
    radius = float(np.max(np.abs(eigenvalues), initial=0.0))
    cutoff = tol * radius
    positive = int(np.sum(eigenvalues > cutoff))
    negative = int(np.sum(eigenvalues < -cutoff))
    return positive, len(eigenvalues) - positive - negative, negative


@dataclass(frozen=True, eq=False)
class FujikiRing:
    """(H^2, q, n, C): top intersections of 2n classes by the polarized Fujiki formula"""
    space: QuadraticSpace
    n: int
    C: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise RangeError(f"n must be positive, got {self.n}")
        if not self.C > 0:
            raise RangeError(f"the Fujiki constant must be positive, got {self.C}")

    @property
    def b(self) -> int:
        return self.space.b

    @property
    def lam(self) -> float:
        """lambda in top_power = lambda q^n; fixed to 1/C"""
        return 1.0 / self.C

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "gram": self.space.gram.tolist(),
            "n": self.n,
            "C": self.C,
            "name": self.name,
        }
