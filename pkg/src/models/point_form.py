"""Forms at a single point in a complex coframe, and positivity verdicts"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BidegreeError, DimensionError
from ..utils.multiindex import Index, increasing, merge, sort_with_sign

PRUNE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class PointForm:
    """
    Constant (p, q)-form on C^n.

    Slots 0..n-1 stand for dz_1..dz_n and slots n..2n-1 for dzbar_1..dzbar_n;
    coefficients live on increasing slot tuples.
    """
    n: int
    p: int
    q: int
    coeffs: Dict[Index, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"complex dimension must be positive, got {self.n}")
        folded: Dict[Index, complex] = {}
        for slots, value in self.coeffs.items():
            sign, ordered = sort_with_sign(tuple(int(s) for s in slots))
            if sign == 0:
                continue
            if any(not 0 <= s < 2 * self.n for s in ordered):
                raise DimensionError(f"slot tuple {ordered} on C^{self.n}")
            holomorphic = sum(1 for s in ordered if s < self.n)
            if (holomorphic, len(ordered) - holomorphic) != (self.p, self.q):
                raise BidegreeError(
                    f"term {ordered} has bidegree ({holomorphic}, {len(ordered) - holomorphic}), "
                    f"expected ({self.p}, {self.q})"
                )
            folded[ordered] = folded.get(ordered, 0j) + sign * complex(value)
        largest = max((abs(c) for c in folded.values()), default=0.0)
        cutoff = PRUNE_TOL * largest
        object.__setattr__(
            self, "coeffs", {s: c for s, c in sorted(folded.items()) if abs(c) > cutoff}
        )

    # constructors

    @classmethod
    def zero(cls, n: int, p: int, q: int) -> "PointForm":
        return cls(n, p, q)

    @classmethod
    def one(cls, n: int) -> "PointForm":
        return cls(n, 0, 0, {(): 1.0})

    @classmethod
    def covector(cls, n: int, vector: Sequence[complex], conjugate: bool = False) -> "PointForm":
        """sum v_r dz_r, or its conjugate sum conj(v_r) dzbar_r"""
        vector = np.asarray(vector, dtype=complex)
        if conjugate:
            return cls(n, 0, 1, {(n + r,): np.conj(v) for r, v in enumerate(vector) if v != 0})
        return cls(n, 1, 0, {(r,): v for r, v in enumerate(vector) if v != 0})

    @classmethod
    def from_matrix(cls, n: int, k: int, matrix: np.ndarray) -> "PointForm":
        """(k, k)-form with coefficient matrix[I, J] on dz_I ^ dzbar_J"""
        rows = list(increasing(n, k))
        coeffs = {}
        for a, I in enumerate(rows):
            for b, J in enumerate(rows):
                if matrix[a, b] != 0:
                    coeffs[I + tuple(n + j for j in J)] = matrix[a, b]
        return cls(n, k, k, coeffs)

    # inspection

    @property
    def degree(self) -> int:
        return self.p + self.q

    @property
    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self, tol: float = 1e-12) -> bool:
        if self.p != self.q:
            return self.is_zero()
        return (self - self.conjugate()).max_abs <= tol * max(1.0, self.max_abs)

    def matrix(self) -> np.ndarray:
        """C[I, J] with the form equal to sum C[I, J] dz_I ^ dzbar_J; (k, k) only"""
        if self.p != self.q:
            raise BidegreeError(f"coefficient matrices exist for (k, k)-forms, got ({self.p}, {self.q})")
        rows = list(increasing(self.n, self.p))
        position = {I: a for a, I in enumerate(rows)}
        out = np.zeros((len(rows), len(rows)), dtype=complex)
        for slots, value in self.coeffs.items():
            I = slots[: self.p]
            J = tuple(s - self.n for s in slots[self.p:])
            out[position[I], position[J]] = value
        return out

    # algebra

    def _check(self, other: "PointForm"):
        if self.n != other.n:
            raise DimensionError(f"forms on C^{self.n} and C^{other.n}")

    def __add__(self, other: "PointForm") -> "PointForm":
        self._check(other)
        if (self.p, self.q) != (other.p, other.q):
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise BidegreeError(f"cannot add ({self.p}, {self.q}) and ({other.p}, {other.q}) forms")
        coeffs = dict(self.coeffs)
        for slots, value in other.coeffs.items():
            coeffs[slots] = coeffs.get(slots, 0j) + value
        return PointForm(self.n, self.p, self.q, coeffs)

    def __neg__(self) -> "PointForm":
        return self * -1

    def __sub__(self, other: "PointForm") -> "PointForm":
        return self + (-other)

    def __mul__(self, factor: complex) -> "PointForm":
        return PointForm(self.n, self.p, self.q, {s: c * factor for s, c in self.coeffs.items()})

    __rmul__ = __mul__

    def wedge(self, other: "PointForm") -> "PointForm":
        self._check(other)
        p, q = self.p + other.p, self.q + other.q
        if p > self.n or q > self.n:
            return PointForm(self.n, min(p, self.n), min(q, self.n))
        coeffs: Dict[Index, complex] = {}
        for left, a in self.coeffs.items():
            for right, b in other.coeffs.items():
                sign, merged = merge(left, right)
                if sign:
                    coeffs[merged] = coeffs.get(merged, 0j) + sign * a * b
        return PointForm(self.n, p, q, coeffs)

    def conjugate(self) -> "PointForm":
        """Swap dz and dzbar slots, conjugate coefficients"""
        n = self.n
        coeffs = {}
        for slots, value in self.coeffs.items():
            sign, ordered = sort_with_sign(tuple(s + n if s < n else s - n for s in slots))
            coeffs[ordered] = sign * np.conj(value)
        return PointForm(n, self.q, self.p, coeffs)

    def absolute(self) -> "PointForm":
        """Coefficientwise modulus, used to bound cancellation in wedge products"""
        return PointForm(self.n, self.p, self.q, {s: abs(c) for s, c in self.coeffs.items()})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "terms": [
                {"slots": list(slots), "re": value.real, "im": value.imag}
                for slots, value in self.coeffs.items()
            ],
        }

    def __repr__(self) -> str:
        return f"PointForm(n={self.n}, bidegree=({self.p}, {self.q}), terms={len(self.coeffs)})"


def power(form: PointForm, k: int) -> PointForm:
    result = PointForm.one(form.n)
    for _ in range(k):
        result = result.wedge(form)
    return result


@dataclass(frozen=True)
class PositivityBudget:
    """Random restarts and projected-descent steps of the weak positivity search"""
    restarts: int = 100
    steps: int = 200
    step_size: float = 0.1

    def scaled(self, factor: float) -> "PositivityBudget":
        """Same step size with restarts and steps cut by `factor`, at least one of each"""
        return replace(
            self,
            restarts=max(1, round(self.restarts * factor)),
            steps=max(1, round(self.steps * factor)),
        )


VIOLATED = "violated"
NO_VIOLATION = "no_violation_found"


@dataclass
class PositivityVerdict:
    """Falsification outcome; a violated verdict always carries its witness"""
    status: str
    trials: int
    seed: int
    witness: Optional[List[np.ndarray]] = None
    value: Optional[float] = None

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    def to_json(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = [[[z.real, z.imag] for z in np.asarray(v)] for v in self.witness]
        return {
            "status": self.status,
            "trials": self.trials,
            "seed": self.seed,
            "witness": witness,
            "value": self.value,
        }


ZERO = "zero"
DEGENERATE = "degenerate-semipositive"
STRICT = "strictly-positive"


@dataclass(frozen=True)
class RankVerdict:
    rank: int
    tag: str
    eigenvalues: Tuple[float, ...] = ()
