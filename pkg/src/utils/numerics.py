"""Dense linear-algebra helpers: null spaces, ranks, compound matrices, sample grids"""

from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

RANK_TOL = 1e-9


def null_space(matrix: np.ndarray, rcond: float = RANK_TOL) -> np.ndarray:
    """Orthonormal kernel basis, threshold relative to the largest singular value"""
    matrix = np.atleast_2d(matrix)
    if not np.any(matrix):
        return np.eye(matrix.shape[1], dtype=matrix.dtype)
    return scipy.linalg.null_space(matrix, rcond=rcond)


def rank(matrix: np.ndarray, rcond: float = RANK_TOL) -> int:
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0
    singular = scipy.linalg.svdvals(matrix)
    if singular.size == 0 or singular[0] == 0:
        return 0
    return int(np.sum(singular > rcond * singular[0]))


def real_kernel(matrix: np.ndarray, rcond: float = RANK_TOL) -> np.ndarray:
    """Real vectors v with M v = 0 for a complex M (kernel of the stacked [Re M; Im M])"""
    stacked = np.vstack([np.real(matrix), np.imag(matrix)])
    return null_space(stacked, rcond=rcond)


def subsets(size: int, k: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(size), k))


def minors(matrix: np.ndarray, k: int) -> np.ndarray:
    """All maximal k-minors det(M[I, :]) of an (N, k) matrix, I increasing"""
    rows = matrix.shape[0]
    if k == 0:
        return np.ones(1, dtype=complex)
    index = np.array(subsets(rows, k))
    return np.linalg.det(matrix[index])


def compound(matrix: np.ndarray, k: int) -> np.ndarray:
    """k-th compound matrix: entries det(M[I, J]) over increasing I, J"""
    rows, cols = matrix.shape
    if k == 0:
        return np.ones((1, 1), dtype=matrix.dtype)
    row_sets, col_sets = subsets(rows, k), subsets(cols, k)
    out = np.empty((len(row_sets), len(col_sets)), dtype=np.result_type(matrix, float))
    for a, rset in enumerate(row_sets):
        block = matrix[list(rset)]
        out[a] = np.linalg.det(np.stack([block[:, list(cset)] for cset in col_sets]))
    return out


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral distance between the column spans of a and b (orthogonal projectors)"""
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    pa = qa @ qa.conj().T
    pb = qb @ qb.conj().T
    return float(np.linalg.norm(pa - pb, 2))


def evaluation_grid(
    dim: int,
    active: Sequence[int],
    planar: Sequence[int] = (),
    seed: int = 0,
    per_axis: int = 5,
    random_points: int = 32,
    max_grid_axes: int = 4,
) -> np.ndarray:
    """
    Sample points: a uniform grid over the first active axes plus seeded random points.

    Periodic axes are sampled at j/per_axis, planar axes on linspace(-2, 2, per_axis).
    With no active axes the origin alone is returned.
    """
    active = list(active)
    planar = set(planar)
    if not active:
        return np.zeros((1, dim))
    grid_axes = active[:max_grid_axes]
    ticks = [
        np.linspace(-2.0, 2.0, per_axis) if a in planar else np.arange(per_axis) / per_axis
        for a in grid_axes
    ]
    mesh = np.stack(np.meshgrid(*ticks, indexing="ij"), axis=-1).reshape(-1, len(grid_axes))
    points = np.zeros((mesh.shape[0] + random_points, dim))
    points[: mesh.shape[0], grid_axes] = mesh
    rng = np.random.default_rng([seed, dim, len(active)])
    for a in active:
        if a in planar:
            points[mesh.shape[0]:, a] = rng.uniform(-2.0, 2.0, random_points)
        else:
            points[mesh.shape[0]:, a] = rng.uniform(0.0, 1.0, random_points)
    return points


def random_unitary(rng: np.random.Generator, size: int) -> np.ndarray:
    gauss = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    q, r = np.linalg.qr(gauss)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def conditioned_frame(rng: np.random.Generator, size: int, spread: float = 2.0) -> np.ndarray:
    """Random invertible complex matrix with condition number at most spread^2"""
    scales = rng.uniform(1.0 / spread, spread, size)
    return random_unitary(rng, size) * scales


def max_abs(array: Optional[np.ndarray]) -> float:
    if array is None or np.size(array) == 0:
        return 0.0
    return float(np.max(np.abs(array)))
