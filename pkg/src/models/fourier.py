"""Trigonometric-polynomial scalar functions on flat tori"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionError

Frequency = Tuple[int, ...]
Powers = Tuple[int, ...]
Key = Tuple[Frequency, Powers]
Number = Union[int, float, complex]

PRUNE_TOL = 1e-12
TWO_PI_I = 2j * math.pi


def _prune(terms: Dict[Key, complex], scale: float) -> Dict[Key, complex]:
    if not terms:
        return terms
    largest = max(abs(c) for c in terms.values())
    cutoff = PRUNE_TOL * max(largest, scale)
    return {key: c for key, c in terms.items() if abs(c) > cutoff}


@dataclass(frozen=True, eq=False)
class FourierScalar:
    """
    Finite sum  sum c * x^a * exp(2 pi i <k, x>)  on R^dim.

    Keys are (frequency k, powers a). Powers are non-zero only on the
    flat planar axes of a lifted space; on torus axes they stay zero.
    """
    dim: int
    terms: Dict[Key, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"dimension must be positive, got {self.dim}")
        clean: Dict[Key, complex] = {}
        for (freq, powers), coeff in self.terms.items():
            freq, powers = tuple(int(k) for k in freq), tuple(int(a) for a in powers)
            if len(freq) != self.dim or len(powers) != self.dim:
                raise DimensionError(
                    f"term key of length {len(freq)} on a {self.dim}-dimensional torus"
                )
            if any(a < 0 for a in powers):
                raise DimensionError("negative polynomial power")
            clean[(freq, powers)] = clean.get((freq, powers), 0j) + complex(coeff)
        object.__setattr__(self, "terms", _prune(clean, 0.0))

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Key, complex], scale: float) -> "FourierScalar":
        scalar = object.__new__(cls)
        object.__setattr__(scalar, "dim", dim)
        object.__setattr__(scalar, "terms", _prune(terms, scale))
        return scalar

    # constructors

    @classmethod
    def zero(cls, dim: int) -> "FourierScalar":
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, value: Number) -> "FourierScalar":
        origin = (0,) * dim
        return cls(dim, {(origin, origin): complex(value)})

    @classmethod
    def exponential(
        cls, dim: int, freq: Sequence[int], coeff: Number = 1.0
    ) -> "FourierScalar":
        """coeff * exp(2 pi i <freq, x>)"""
        return cls(dim, {(tuple(freq), (0,) * dim): complex(coeff)})

    @classmethod
    def sin(cls, dim: int, axis: int, k: int = 1, amplitude: float = 1.0) -> "FourierScalar":
        """amplitude * sin(2 pi k x_axis)"""
        plus = tuple(k if a == axis else 0 for a in range(dim))
        minus = tuple(-k if a == axis else 0 for a in range(dim))
        flat = (0,) * dim
        return cls(dim, {(plus, flat): amplitude / 2j, (minus, flat): -amplitude / 2j})

    @classmethod
    def cos(cls, dim: int, axis: int, k: int = 1, amplitude: float = 1.0) -> "FourierScalar":
        """amplitude * cos(2 pi k x_axis)"""
        plus = tuple(k if a == axis else 0 for a in range(dim))
        minus = tuple(-k if a == axis else 0 for a in range(dim))
        flat = (0,) * dim
        return cls(dim, {(plus, flat): amplitude / 2, (minus, flat): amplitude / 2})

    @classmethod
    def coordinate(cls, dim: int, axis: int) -> "FourierScalar":
        """The coordinate function x_axis of a planar (non-periodic) axis"""
        powers = tuple(1 if a == axis else 0 for a in range(dim))
        return cls(dim, {((0,) * dim, powers): 1.0})

    @classmethod
    def lift_constant(cls, value: Union[Number, "FourierScalar"], dim: int) -> "FourierScalar":
        if isinstance(value, FourierScalar):
            if value.dim != dim:
                raise DimensionError(f"scalar on {value.dim} axes used on {dim} axes")
            return value
        return cls.constant(dim, value)

    # inspection

    @property
    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        origin = (0,) * self.dim
        return all(key == (origin, origin) for key in self.terms)

    def constant_term(self) -> complex:
        origin = (0,) * self.dim
        return self.terms.get((origin, origin), 0j)

    def is_real(self, tol: float = 1e-12) -> bool:
        """c_{-k} = conj(c_k) on every stored term"""
        scale = max(1.0, self.max_abs)
        for (freq, powers), coeff in self.terms.items():
            mirror = self.terms.get((tuple(-k for k in freq), powers), 0j)
            if abs(mirror - coeff.conjugate()) > tol * scale:
                return False
        return True

    def active_axes(self) -> List[int]:
        """Axes the function depends on"""
        axes = set()
        for freq, powers in self.terms:
            axes.update(a for a in range(self.dim) if freq[a] or powers[a])
        return sorted(axes)

    def polynomial_axes(self) -> List[int]:
        axes = set()
        for _, powers in self.terms:
            axes.update(a for a in range(self.dim) if powers[a])
        return sorted(axes)

    # arithmetic

    def __add__(self, other: Union["FourierScalar", Number]) -> "FourierScalar":
        other = FourierScalar.lift_constant(other, self.dim)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms.get(key, 0j) + coeff
        return FourierScalar._raw(self.dim, terms, max(self.max_abs, other.max_abs))

    __radd__ = __add__

    def __neg__(self) -> "FourierScalar":
        return FourierScalar._raw(self.dim, {k: -c for k, c in self.terms.items()}, 0.0)

    def __sub__(self, other: Union["FourierScalar", Number]) -> "FourierScalar":
        return self + (-FourierScalar.lift_constant(other, self.dim))

    def __rsub__(self, other: Number) -> "FourierScalar":
        return FourierScalar.lift_constant(other, self.dim) - self

    def __mul__(self, other: Union["FourierScalar", Number]) -> "FourierScalar":
        if not isinstance(other, FourierScalar):
            if not isinstance(other, (int, float, complex, np.number)):
                return NotImplemented
            factor = complex(other)
            if factor == 0:
                return FourierScalar.zero(self.dim)
            return FourierScalar._raw(
                self.dim, {k: c * factor for k, c in self.terms.items()}, 0.0
            )
        if other.dim != self.dim:
            raise DimensionError(f"cannot multiply scalars on {self.dim} and {other.dim} axes")
        terms: Dict[Key, complex] = {}
        for (f1, p1), c1 in self.terms.items():
            for (f2, p2), c2 in other.terms.items():
                key = (
                    tuple(a + b for a, b in zip(f1, f2)),
                    tuple(a + b for a, b in zip(p1, p2)),
                )
                terms[key] = terms.get(key, 0j) + c1 * c2
        return FourierScalar._raw(self.dim, terms, self.max_abs * other.max_abs)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FourierScalar):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def conjugate(self) -> "FourierScalar":
        terms = {
            (tuple(-k for k in freq), powers): coeff.conjugate()
            for (freq, powers), coeff in self.terms.items()
        }
        return FourierScalar._raw(self.dim, terms, 0.0)

    def real_part(self) -> "FourierScalar":
        return (self + self.conjugate()) * 0.5

    def imag_part(self) -> "FourierScalar":
        return (self - self.conjugate()) * (-0.5j)

    def derivative(self, axis: int) -> "FourierScalar":
        """Exact partial derivative along one axis"""
        terms: Dict[Key, complex] = {}
        scale = 0.0
        for (freq, powers), coeff in self.terms.items():
            if freq[axis]:
                contribution = coeff * TWO_PI_I * freq[axis]
                terms[(freq, powers)] = terms.get((freq, powers), 0j) + contribution
                scale = max(scale, abs(contribution))
            if powers[axis]:
                lowered = tuple(a - 1 if b == axis else a for b, a in enumerate(powers))
                contribution = coeff * powers[axis]
                terms[(freq, lowered)] = terms.get((freq, lowered), 0j) + contribution
                scale = max(scale, abs(contribution))
        return FourierScalar._raw(self.dim, terms, scale)

    # geometry of the domain

    def restrict(self, axes: Sequence[int]) -> "FourierScalar":
        """Pullback to the coordinate subtorus through the origin spanned by `axes`"""
        axes = list(axes)
        kept = set(axes)
        terms: Dict[Key, complex] = {}
        for (freq, powers), coeff in self.terms.items():
            if any(powers[a] for a in range(self.dim) if a not in kept):
                continue
            key = (tuple(freq[a] for a in axes), tuple(powers[a] for a in axes))
            terms[key] = terms.get(key, 0j) + coeff
        return FourierScalar._raw(len(axes), terms, self.max_abs)

    def lift(self, dim: int) -> "FourierScalar":
        """Pullback along the projection onto the first self.dim axes"""
        if dim < self.dim:
            raise DimensionError(f"cannot lift a {self.dim}-axis scalar to {dim} axes")
        pad = (0,) * (dim - self.dim)
        terms = {(f + pad, p + pad): c for (f, p), c in self.terms.items()}
        return FourierScalar._raw(dim, terms, 0.0)

    def __call__(self, point: Sequence[float]) -> complex:
        return complex(self.evaluate(np.asarray(point, dtype=float)[None, :])[0])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Values at an (m, dim) array of points"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.zeros(points.shape[0], dtype=complex)
        for (freq, powers), coeff in self.terms.items():
            term = coeff * np.exp(TWO_PI_I * (points @ np.asarray(freq, dtype=float)))
            if any(powers):
                term = term * np.prod(points ** np.asarray(powers), axis=1)
            values += term
        return values

    # serialization helpers

    def to_json(self) -> List[dict]:
        entries = []
        for (freq, powers), coeff in sorted(self.terms.items()):
            entry = {"freq": list(freq), "re": coeff.real, "im": coeff.imag}
            if any(powers):
                entry["powers"] = list(powers)
            entries.append(entry)
        return entries

    @classmethod
    def from_json(cls, dim: int, entries: Iterable[dict]) -> "FourierScalar":
        terms: Dict[Key, complex] = {}
        for entry in entries:
            freq = tuple(entry["freq"])
            powers = tuple(entry.get("powers", (0,) * dim))
            terms[(freq, powers)] = complex(entry["re"], entry["im"])
        return cls(dim, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "FourierScalar(0)"
        if self.is_constant():
            return f"FourierScalar({self.constant_term()})"
        return f"FourierScalar(dim={self.dim}, terms={len(self.terms)})"

