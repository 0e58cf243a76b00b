"""Fujiki rings: polarized top intersections, the BBF form and its corollaries"""

import json
import logging
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import factorial, prod
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from ..errors import ArityError, ConeError, ConfigError, NotFujikiType, NotIsotropic, SerializationError
from ..models.lattice import FujikiRing, QuadraticSpace
from ..utils.multiindex import double_factorial, perfect_matchings
from ..utils.serialization import ring_from_json

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).resolve().parent.parent / "data" / "lattices"
PRESETS = ("toy4", "k3", "toy7")

Scalar = Union[float, complex]
Oracle = Callable[[Sequence[np.ndarray]], Scalar]


def _real_if_possible(value: complex, vectors: Sequence[np.ndarray]) -> Scalar:
    if any(np.iscomplexobj(v) for v in vectors):
        return complex(value)
    return float(np.real(value))


def _pair_matrix(ring: FujikiRing, classes: Sequence[np.ndarray]) -> np.ndarray:
    stacked = np.array([np.asarray(c) for c in classes])
    return stacked @ ring.space.gram @ stacked.T


def _check_arity(ring: FujikiRing, classes: Sequence[np.ndarray], count: int):
    if len(classes) != count:
        raise ArityError(f"expected {count} classes, got {len(classes)}", expected=count, got=len(classes))


def fujiki_product(ring: FujikiRing, classes: Sequence[np.ndarray]) -> Scalar:
    """
    Top intersection of 2n classes.

    Evaluates (1/C)(1/(2n)!) sum over permutations of prod q(eta_s(2i-1), eta_s(2i))
    as (1/C)(1/(2n-1)!!) times the sum over perfect matchings.
    """
    size = 2 * ring.n
    _check_arity(ring, classes, size)
    pairs = _pair_matrix(ring, classes)
    matchings = perfect_matchings(tuple(range(size)))
    total = sum(prod(pairs[a, b] for a, b in matching) for _, matching in matchings)
    return _real_if_possible(total / (ring.C * double_factorial(size - 1)), classes)


def naive_fujiki_product(ring: FujikiRing, classes: Sequence[np.ndarray]) -> Scalar:
    """Same value summed over all (2n)! permutations"""
    size = 2 * ring.n
    _check_arity(ring, classes, size)
    pairs = _pair_matrix(ring, classes)
    total = sum(
        prod(pairs[order[2 * i], order[2 * i + 1]] for i in range(ring.n))
        for order in permutations(range(size))
    )
    return _real_if_possible(total / (ring.C * factorial(size)), classes)


def top_power(ring: FujikiRing, eta: np.ndarray) -> Scalar:
    return fujiki_product(ring, [eta] * (2 * ring.n))


def _scale(ring: FujikiRing, vectors: Sequence[np.ndarray]) -> float:
    """Size bound for a product of these vectors, used for relative zero tests"""
    norm = float(np.max(np.abs(ring.space.gram)))
    return prod(float(np.linalg.norm(v)) for v in vectors) * norm ** (len(vectors) // 2) / ring.C


def _basis(b: int) -> np.ndarray:
    return np.eye(b)


def isotropic_product_vanishes(
    ring: FujikiRing, etas: Sequence[np.ndarray], tol: float = 1e-12, zero_tol: float = 1e-10
) -> bool:
    """
    True iff eta_1 ... eta_{n+1} pairs to zero with every completion by basis vectors.

    Raises:
        NotIsotropic: when some q(eta_i, eta_j) is not zero
    """
    _check_arity(ring, etas, ring.n + 1)
    pairs = _pair_matrix(ring, etas)
    bound = max(float(np.linalg.norm(v)) for v in etas) ** 2 * float(np.max(np.abs(ring.space.gram)))
    if np.max(np.abs(pairs)) > tol * max(1.0, bound):
        i, j = np.unravel_index(np.argmax(np.abs(pairs)), pairs.shape)
        raise NotIsotropic(
            f"q(eta_{i + 1}, eta_{j + 1}) = {pairs[i, j]:.3e}",
            pair=[int(i), int(j)],
            value=pairs[i, j],
        )
    basis = _basis(ring.b)
    for completion in combinations_with_replacement(range(ring.b), ring.n - 1):
        vectors = list(etas) + [basis[c] for c in completion]
        value = fujiki_product(ring, vectors)
        if abs(value) > zero_tol * max(_scale(ring, vectors), 1e-300):
            logger.debug("isotropic product survives completion %s: %r", completion, value)
            return False
    return True


def nilpotency_index(ring: FujikiRing, eta: np.ndarray, tol: float = 1e-10) -> int:
    """Largest k with eta^k non-zero against some completion by basis vectors (0 for eta = 0)"""
    basis = _basis(ring.b)
    size = 2 * ring.n
    for k in range(size, 0, -1):
        for completion in combinations_with_replacement(range(ring.b), size - k):
            vectors = [eta] * k + [basis[c] for c in completion]
            if abs(fujiki_product(ring, vectors)) > tol * max(_scale(ring, vectors), 1e-300):
                return k
    return 0


def kahler_scale(ring: FujikiRing, omega: np.ndarray) -> float:
    """mu = q(omega, omega)^{n-1} / (C (2n - 1))"""
    Q = ring.space.q(omega, omega)
    return Q ** (ring.n - 1) / (ring.C * (2 * ring.n - 1))


def bbf_via_kahler(ring: FujikiRing, eta1: np.ndarray, eta2: np.ndarray, omega: np.ndarray) -> Scalar:
    """
    int w^{2n-2} eta1 eta2 - ((2n-2)/(2n-1)) (int w^{2n-1} eta1)(int w^{2n-1} eta2) / int w^{2n},
    which equals kahler_scale(ring, omega) * q(eta1, eta2).

    Raises:
        ConeError: when q(omega, omega) <= 0
    """
    n = ring.n
    Q = ring.space.q(omega, omega)
    if Q <= 0:
        raise ConeError(f"q(omega, omega) = {Q:.3e} is not positive", value=Q)
    mixed = fujiki_product(ring, [omega] * (2 * n - 2) + [eta1, eta2])
    first = fujiki_product(ring, [omega] * (2 * n - 1) + [eta1])
    second = fujiki_product(ring, [omega] * (2 * n - 1) + [eta2])
    volume = fujiki_product(ring, [omega] * (2 * n))
    return mixed - (2 * n - 2) / (2 * n - 1) * first * second / volume


def bbf_via_symplectic(ring: FujikiRing, eta: np.ndarray, sigma: np.ndarray, tol: float = 1e-10) -> float:
    """
    (n/2) int eta^2 (s sbar)^{n-1} + (1-n) (int eta s^{n-1} sbar^n)(int eta s^n sbar^{n-1}) / int (s sbar)^n

    Raises:
        ConeError: unless q(sigma, sigma) = 0 and q(sigma, conj sigma) > 0
    """
    n = ring.n
    sigma = np.asarray(sigma, dtype=complex)
    bar = sigma.conj()
    norm = ring.space.hermitian(sigma, sigma).real
    if norm <= 0 or abs(ring.space.q(sigma, sigma)) > tol * norm:
        raise ConeError("sigma is not a period: need q(s, s) = 0 and q(s, sbar) > 0")
    volume = fujiki_product(ring, [sigma] * n + [bar] * n)
    first = fujiki_product(ring, [eta, eta] + [sigma] * (n - 1) + [bar] * (n - 1))
    left = fujiki_product(ring, [eta] + [sigma] * (n - 1) + [bar] * n)
    right = fujiki_product(ring, [eta] + [sigma] * n + [bar] * (n - 1))
    return float(np.real(n / 2 * first + (1 - n) * left * right / volume))


def bbf_fit(
    n: int,
    b: int,
    oracle: Oracle,
    positive: np.ndarray,
    samples: int = 100,
    seed: int = 0,
    tol: float = 1e-8,
) -> Tuple[np.ndarray, float]:
    """
    Recover (q, lambda) from a 2n-multilinear top-intersection oracle.

    The gauge is q(positive, positive) = 1, which also fixes the sign.

    Raises:
        NotFujikiType: when lambda <= 0 or the fit misses a random test vector
    """
    size = 2 * n
    basis = _basis(b)
    positive = np.asarray(positive, dtype=float)
    lam = float(np.real(oracle([positive] * size)))
    if lam <= 0:
        raise NotFujikiType(f"oracle(p, ..., p) = {lam:.3e} is not positive", value=lam)
    linear = np.array([np.real(oracle([positive] * (size - 1) + [basis[i]])) for i in range(b)]) / lam
    gram = np.empty((b, b))
    for i in range(b):
        for j in range(i, b):
            value = np.real(oracle([positive] * (size - 2) + [basis[i], basis[j]]))
            gram[i, j] = gram[j, i] = (size - 1) * value / lam - (size - 2) * linear[i] * linear[j]
    rng = np.random.default_rng(seed)
    norm = float(np.max(np.abs(gram)))
    for index in range(samples):
        v = rng.standard_normal(b)
        lhs = float(np.real(oracle([v] * size)))
        rhs = lam * float(v @ gram @ v) ** n
        scale = max(abs(lhs), abs(rhs), lam * (norm * float(v @ v)) ** n)
        if abs(lhs - rhs) > tol * scale:
            raise NotFujikiType(
                f"oracle differs from lambda q^n by {abs(lhs - rhs):.3e} on test vector {index}",
                index=index,
                vector=v,
                residual=abs(lhs - rhs),
            )
    return gram, lam


def random_isotropic(ring: FujikiRing, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    """count pairwise orthogonal isotropic vectors, random within a maximal isotropic family"""
    eigenvalues, vectors = np.linalg.eigh(ring.space.gram)
    positive = vectors[:, eigenvalues > 0] / np.sqrt(eigenvalues[eigenvalues > 0])
    negative = vectors[:, eigenvalues < 0] / np.sqrt(-eigenvalues[eigenvalues < 0])
    if count > min(positive.shape[1], negative.shape[1]):
        raise NotIsotropic(f"no {count} orthogonal isotropic classes in signature "
                           f"({positive.shape[1]}, {negative.shape[1]})")

    def rotation(size: int) -> np.ndarray:
        orthogonal, _ = np.linalg.qr(rng.standard_normal((size, size)))
        return orthogonal

    plus = positive @ rotation(positive.shape[1])
    minus = negative @ rotation(negative.shape[1])
    isotropic = plus[:, :count] + minus[:, :count]
    mixed = isotropic @ (rng.standard_normal((count, count)) + 2 * np.eye(count))
    return [mixed[:, i] for i in range(count)]


@lru_cache(maxsize=None)
def load_preset(name: str) -> FujikiRing:
    """
    A shipped lattice preset by name, or a lattice JSON file by path.

    Raises:
        ConfigError: when the preset or file does not exist
    """
    path = PRESET_DIR / f"{name}.json" if name in PRESETS else Path(name)
    if not path.is_file():
        raise ConfigError(f"unknown lattice {name!r}; presets: {', '.join(PRESETS)}", lattice=name)
    try:
        return ring_from_json(json.loads(path.read_text()))
    except json.JSONDecodeError as error:
        raise SerializationError(f"{path}: {error}") from error


@lru_cache(maxsize=None)
def torus_lattice() -> FujikiRing:
    """
    H^2(T^4, R) = Lambda^2 R^4 with q(a, b) vol = a ^ b.

    Coordinates follow increasing pairs (01, 02, 03, 12, 13, 23).
    """
    gram = np.zeros((6, 6))
    for i, j, sign in ((0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)):
        gram[i, j] = gram[j, i] = sign
    return FujikiRing(QuadraticSpace(gram, "torus"), n=1, C=1.0, name="torus")
