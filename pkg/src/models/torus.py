"""Flat torus models of Lagrangian fibrations and members of their degenerate twistor families"""

from dataclasses import dataclass
from typing import List, Tuple

from .form import Form
from .structure import ComplexStructureField, HyperkahlerTriple


@dataclass(frozen=True)
class TorusModel:
    """
    T^{4n} with a holomorphic symplectic form, a coordinate fibration and a pulled-back form.

    The fibration projects onto `base_axes`; fibers are the coordinate subtori
    spanned by `fiber_axes`.
    """
    n: int
    triple: HyperkahlerTriple
    omega: Form
    eta: Form
    base_axes: Tuple[int, ...]
    fiber_axes: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return 4 * self.n

    def omega_t(self, t: complex) -> Form:
        """Omega + t eta"""
        return self.omega + self.eta * complex(t)

    def active_axes(self) -> List[int]:
        return sorted(set(self.omega.active_axes()) | set(self.eta.active_axes()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "omega": self.omega.to_json(),
            "eta": self.eta.to_json(),
            "base_axes": [a + 1 for a in self.base_axes],
            "fiber_axes": [a + 1 for a in self.fiber_axes],
        }


@dataclass(frozen=True)
class FamilyMember:
    """One complex structure of the family"""
    t: complex
    omega_t: Form
    structure: ComplexStructureField
