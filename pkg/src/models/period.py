"""Period points and oriented planes in H^2"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .lattice import QuadraticSpace


@dataclass(frozen=True, eq=False)
class PeriodPoint:
    """A line l in H^2 (x) C, stored through its canonical representative"""
    space: QuadraticSpace
    rep: np.ndarray

    @property
    def q_ll(self) -> complex:
        return complex(self.space.q(self.rep, self.rep))

    @property
    def q_llbar(self) -> float:
        return self.space.hermitian(self.rep, self.rep).real

    def distance(self, other: "PeriodPoint") -> float:
        return float(np.max(np.abs(self.rep - other.rep)))

    def to_json(self) -> dict:
        return {"rep": [[z.real, z.imag] for z in self.rep], "space": self.space.name}


@dataclass(frozen=True, eq=False)
class Plane:
    """
    A real k-plane (k = 2 or 3) in H^2.

    basis rows are Euclidean-orthonormal; orientation is +1 when it agrees
    with the order of the rows. frame, when present, is the q-adapted basis
    the plane was built from (rows (w1, w2[, w3]), q-orthonormal on the positive part).
    """
    space: QuadraticSpace
    basis: np.ndarray
    orientation: int = 1
    signature: Tuple[int, int, int] = (0, 0, 0)
    frame: Optional[np.ndarray] = None

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    def gram(self) -> np.ndarray:
        """q restricted to the plane, in the basis rows"""
        return self.basis @ self.space.gram @ self.basis.T

    def is_positive(self) -> bool:
        return self.signature == (self.k, 0, 0)

    def reversed(self) -> "Plane":
        return Plane(self.space, self.basis, -self.orientation, self.signature, self.frame)

    def to_json(self) -> dict:
        return {
            "basis": self.basis.tolist(),
            "orientation": self.orientation,
            "signature": list(self.signature),
        }
