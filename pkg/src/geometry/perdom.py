"""Period-domain linear algebra: period points, positive planes, twistor and degenerate twistor lines"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import RankError, SignatureError, ZeroVectorError
from ..models.lattice import QuadraticSpace, signature_of
from ..models.period import PeriodPoint, Plane
from ..utils.numerics import rank

logger = logging.getLogger(__name__)

PERIOD_TOL = 1e-10
SIGNIFICANCE = 1e-12
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def canonical_representative(vector: Sequence[complex]) -> np.ndarray:
    """Unit Euclidean norm, first coordinate above 1e-12 in modulus made positive real"""
    vector = np.asarray(vector, dtype=complex)
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise ZeroVectorError("the zero vector has no projective class")
    vector = vector / norm
    first = np.flatnonzero(np.abs(vector) > SIGNIFICANCE)[0]
    return vector * (abs(vector[first]) / vector[first])


def is_period_point(space: QuadraticSpace, l: Sequence[complex], tol: float = PERIOD_TOL) -> bool:
    """q(l, l) = 0 and q(l, lbar) > 0"""
    l = np.asarray(l, dtype=complex)
    if not np.any(l):
        raise ZeroVectorError("the zero vector is not a period")
    llbar = space.hermitian(l, l).real
    return llbar > 0 and abs(space.q(l, l)) <= tol * llbar


def period_point(space: QuadraticSpace, l: Sequence[complex], tol: float = PERIOD_TOL) -> PeriodPoint:
    if not is_period_point(space, l, tol):
        raise SignatureError("vector does not lie in the period domain", vector=np.asarray(l))
    return PeriodPoint(space, canonical_representative(l))


def signature(space: QuadraticSpace, basis: np.ndarray, tol: float = PERIOD_TOL) -> Tuple[int, int, int]:
    """(positive, null, negative) counts of q restricted to the span of the basis rows"""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if rank(basis) < basis.shape[0]:
        raise RankError(f"{basis.shape[0]} vectors span a space of rank {rank(basis)}")
    return signature_of(basis @ space.gram @ basis.T, tol)


def _euclidean_basis(frame: np.ndarray) -> np.ndarray:
    """Gram-Schmidt of the rows; keeps the row order and hence the orientation"""
    orthogonal, triangular = np.linalg.qr(frame.T)
    signs = np.sign(np.diag(triangular))
    signs[signs == 0] = 1.0
    return (orthogonal * signs).T


def plane_from_frame(space: QuadraticSpace, frame: np.ndarray, orientation: int = 1) -> Plane:
    """
    The plane spanned by the rows of frame.

    Raises:
        RankError: when the rows are dependent
    """
    frame = np.atleast_2d(np.asarray(frame, dtype=float))
    sig = signature(space, frame)
    return Plane(space, _euclidean_basis(frame), orientation, sig, frame)


def _q_orthonormal(space: QuadraticSpace, rows: np.ndarray) -> np.ndarray:
    """Gram-Schmidt with respect to q; rows must span a q-positive space"""
    out: List[np.ndarray] = []
    for row in rows:
        vector = np.array(row, dtype=float)
        for previous in out:
            vector = vector - space.q(vector, previous) * previous
        length = space.q(vector, vector)
        if length <= 0:
            raise SignatureError("subspace is not q-positive", value=length)
        out.append(vector / np.sqrt(length))
    return np.array(out)


def line_to_plane(point: PeriodPoint) -> Plane:
    """The oriented positive plane <Re l, Im l>"""
    l = point.rep
    if not is_period_point(point.space, l):
        raise SignatureError("not a period point", vector=l)
    return plane_from_frame(point.space, np.array([l.real, l.imag]))


def plane_to_line(plane: Plane) -> PeriodPoint:
    """
    The line u + iv for a q-orthonormal oriented basis (u, v) of a positive 2-plane.

    Raises:
        SignatureError: unless the plane is a q-positive 2-plane
    """
    if plane.k != 2 or not plane.is_positive():
        raise SignatureError(f"need a positive 2-plane, got signature {plane.signature}", signature=plane.signature)
    u, v = _q_orthonormal(plane.space, plane.basis)
    if plane.orientation < 0:
        v = -v
    return PeriodPoint(plane.space, canonical_representative(u + 1j * v))


def _twistor_frame(plane: Plane) -> np.ndarray:
    if plane.k != 3 or not plane.is_positive():
        raise SignatureError(f"twistor lines need a positive 3-plane, got signature {plane.signature}",
                             signature=plane.signature)
    rows = plane.frame if plane.frame is not None else plane.basis
    frame = _q_orthonormal(plane.space, rows)
    if plane.orientation < 0:
        frame[2] = -frame[2]
    return frame


def sphere_points(samples: int) -> np.ndarray:
    """Fibonacci lattice on S^2, one row per point"""
    index = np.arange(samples) + 0.5
    z = 1.0 - 2.0 * index / samples
    radius = np.sqrt(1.0 - z * z)
    phi = GOLDEN_ANGLE * np.arange(samples)
    return np.stack([radius * np.cos(phi), radius * np.sin(phi), z], axis=1)


def _normal_line(frame: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """u + iv for the oriented plane normal to `normal` inside the frame coordinates"""
    normal = normal / np.linalg.norm(normal)
    reference = np.eye(3)[int(np.argmin(np.abs(normal)))]
    u = reference - (reference @ normal) * normal
    u = u / np.linalg.norm(u)
    v = np.cross(normal, u)
    return (u + 1j * v) @ frame


def twistor_point(plane: Plane, normal: Sequence[float]) -> PeriodPoint:
    """Period of the oriented 2-plane inside a positive 3-plane with the given unit normal"""
    frame = _twistor_frame(plane)
    return PeriodPoint(plane.space, canonical_representative(_normal_line(frame, np.asarray(normal, dtype=float))))


def twistor_line(plane: Plane, samples: int) -> List[Tuple[np.ndarray, PeriodPoint]]:
    """
    Sampled twistor line of a positive 3-plane.

    Normals are given in the q-orthonormal frame of the plane; the normal
    (a, b, c) yields the period of the holomorphic form of aI + bJ + cK when
    the frame is (omega_I, omega_J, omega_K).

    Returns:
        (normal, period point) pairs
    """
    frame = _twistor_frame(plane)
    out = []
    for normal in sphere_points(samples):
        out.append((normal, PeriodPoint(plane.space, canonical_representative(_normal_line(frame, normal)))))
    logger.debug("sampled %d twistor periods", samples)
    return out


def _degenerate_frame(plane: Plane, tol: float) -> np.ndarray:
    if plane.frame is not None and plane.frame.shape[0] == 3:
        frame = np.array(plane.frame, dtype=float)
    else:
        eigenvalues, vectors = np.linalg.eigh(plane.gram())
        order = np.argsort(-eigenvalues)
        eigenvalues, vectors = eigenvalues[order], vectors[:, order]
        if eigenvalues[1] <= 0:
            raise SignatureError(f"expected signature (2, 1, 0), got {plane.signature}", signature=plane.signature)
        scale = np.array([1 / np.sqrt(eigenvalues[0]), 1 / np.sqrt(eigenvalues[1]), 1.0])
        frame = (vectors * scale).T @ plane.basis
    if plane.orientation < 0:
        frame[1] = -frame[1]
    gram = frame @ plane.space.gram @ frame.T
    expected = np.diag([1.0, 1.0, 0.0])
    deviation = float(np.max(np.abs(gram - expected)))
    if deviation > tol * max(1.0, float(np.max(np.abs(frame))) ** 2):
        raise SignatureError(
            "frame is not (+, +, 0) with the null direction q-orthogonal to the positive part",
            gram=gram,
            deviation=deviation,
        )
    return frame


def degenerate_twistor_line(plane: Plane, t: complex, tol: float = PERIOD_TOL) -> PeriodPoint:
    """
    The period (w1 + i w2) + t w3 of the positive 2-plane <w1 + Re(t) w3, w2 + Im(t) w3>.

    Raises:
        SignatureError: unless the frame (w1, w2, w3) has q-Gram diag(1, 1, 0)
    """
    w1, w2, w3 = _degenerate_frame(plane, tol)
    return PeriodPoint(plane.space, canonical_representative((w1 + 1j * w2) + complex(t) * w3))


def hyperkahler_plane(
    space: QuadraticSpace,
    omega_I: np.ndarray,
    omega_J: np.ndarray,
    omega_K: np.ndarray,
    tol: float = PERIOD_TOL,
) -> Plane:
    """
    <omega_I, omega_J, omega_K> with its normalized frame.

    Raises:
        SignatureError: unless the classes are pairwise q-orthogonal with one common positive norm
    """
    classes = np.array([omega_I, omega_J, omega_K], dtype=float)
    gram = classes @ space.gram @ classes.T
    norm = float(gram[0, 0])
    if norm <= 0 or np.max(np.abs(gram - norm * np.eye(3))) > tol * norm:
        raise SignatureError("classes are not a q-orthogonal triple of equal positive norm", gram=gram)
    return plane_from_frame(space, classes / np.sqrt(norm))


def plane_points(plane: Plane, t: complex, tol: Optional[float] = None) -> np.ndarray:
    """Real basis <w1 + Re(t) w3, w2 + Im(t) w3> of the degenerate family member at t"""
    w1, w2, w3 = _degenerate_frame(plane, tol or PERIOD_TOL)
    t = complex(t)
    return np.array([w1 + t.real * w3, w2 + t.imag * w3])
