"""Fujiki-relation identities on a lattice preset"""

import logging
from typing import Callable, List, Optional

import numpy as np

from ..errors import NotIsotropic
from ..geometry.bbf import (
    bbf_fit,
    bbf_via_kahler,
    bbf_via_symplectic,
    fujiki_product,
    isotropic_product_vanishes,
    kahler_scale,
    load_preset,
    naive_fujiki_product,
    nilpotency_index,
    random_isotropic,
    top_power,
)
from ..models.report import Check
from .base import Campaign, Job

logger = logging.getLogger(__name__)

NAIVE_MAX_DEGREE = 6


def _relative(found: complex, expected: complex) -> float:
    return abs(found - expected) / max(1.0, abs(expected))


class FujikiCampaign(Campaign):
    """Randomized identities of the polarized Fujiki formula"""

    command = "fujiki"

    def __init__(self, config, threads: int = 1):
        super().__init__(config, threads)
        self.ring = load_preset(config.lattice)

    def model(self):
        return self.ring.to_json()

    def _rng(self, stream: int, index: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, stream, index])

    def _positive(self, rng: np.random.Generator) -> np.ndarray:
        """A random class with q(omega, omega) > 0"""
        direction = self._positive_direction()
        while True:
            omega = 3 * direction + 0.5 * rng.standard_normal(self.ring.b)
            if self.ring.space.q(omega, omega) > 0:
                return omega

    def _positive_direction(self) -> np.ndarray:
        eigenvalues, vectors = np.linalg.eigh(self.ring.space.gram)
        return vectors[:, -1] / np.sqrt(eigenvalues[-1])

    def _aggregate(self, name: str, trial: Callable[[int], Optional[float]], tol: float) -> List[Check]:
        worst, witness, count = 0.0, None, 0
        for index in range(self.config.trials):
            defect = trial(index)
            if defect is None:
                continue
            count += 1
            if defect > worst:
                worst = defect
                if defect > tol:
                    witness = {"index": index, "defect": defect}
        logger.debug("%s: %d instances, worst defect %.3e", name, count, worst)
        return [Check(name, worst, worst <= tol, witness=witness, params={"instances": count})]

    # identities

    def _matching(self) -> List[Check]:
        if 2 * self.ring.n > NAIVE_MAX_DEGREE:
            return []

        def trial(index: int) -> float:
            rng = self._rng(1, index)
            classes = [rng.integers(-3, 4, self.ring.b).astype(float) for _ in range(2 * self.ring.n)]
            return abs(fujiki_product(self.ring, classes) - naive_fujiki_product(self.ring, classes))

        return self._aggregate("matching_vs_naive", trial, 0.0)

    def _symmetry(self) -> List[Check]:
        def trial(index: int) -> float:
            rng = self._rng(2, index)
            classes = [rng.standard_normal(self.ring.b) for _ in range(2 * self.ring.n)]
            shuffled = [classes[i] for i in rng.permutation(len(classes))]
            return _relative(fujiki_product(self.ring, shuffled), fujiki_product(self.ring, classes))

        return self._aggregate("symmetry", trial, 1e-12)

    def _top_power(self) -> List[Check]:
        space, n = self.ring.space, self.ring.n

        def trial(index: int) -> float:
            eta = self._rng(3, index).standard_normal(self.ring.b)
            return _relative(top_power(self.ring, eta), self.ring.lam * space.q(eta, eta) ** n)

        return self._aggregate("top_power", trial, 1e-10)

    def _differentiation(self) -> List[Check]:
        space, n = self.ring.space, self.ring.n

        def trial(index: int) -> float:
            rng = self._rng(4, index)
            eta, zeta = rng.standard_normal(self.ring.b), rng.standard_normal(self.ring.b)
            found = fujiki_product(self.ring, [eta] * (2 * n - 1) + [zeta])
            expected = self.ring.lam * space.q(eta, eta) ** (n - 1) * space.q(eta, zeta)
            size = float(np.max(np.abs(space.gram)))
            length = np.linalg.norm(eta)
            scale = self.ring.lam * (size * length ** 2) ** (n - 1) * size * length * np.linalg.norm(zeta)
            return abs(found - expected) / max(scale, 1e-300)

        return self._aggregate("differentiation", trial, 1e-10)

    def _isotropic(self) -> List[Check]:
        def trial(index: int) -> Optional[float]:
            try:
                etas = random_isotropic(self.ring, self.ring.n + 1, self._rng(5, index))
            except NotIsotropic:
                return None
            return 0.0 if isotropic_product_vanishes(self.ring, etas, self.tol.isotropy) else 1.0

        return self._aggregate("isotropic_vanishing", trial, 0.0)

    def _nilpotency(self) -> List[Check]:
        n = self.ring.n

        def trial(index: int) -> Optional[float]:
            rng = self._rng(6, index)
            generic = rng.standard_normal(self.ring.b)
            defect = float(abs(nilpotency_index(self.ring, generic) - 2 * n))
            try:
                (isotropic,) = random_isotropic(self.ring, 1, rng)
            except NotIsotropic:
                return defect
            return defect + abs(nilpotency_index(self.ring, isotropic) - n)

        return self._aggregate("nilpotency", trial, 0.0)

    def _kahler(self) -> List[Check]:
        space = self.ring.space

        def trial(index: int) -> Optional[float]:
            rng = self._rng(7, index)
            omega = self._positive(rng)
            eta1, eta2 = rng.standard_normal(self.ring.b), rng.standard_normal(self.ring.b)
            pairing = space.q(eta1, eta2)
            if abs(pairing) < 1e-3 * np.linalg.norm(eta1) * np.linalg.norm(eta2):
                return None
            mu = kahler_scale(self.ring, omega)
            return abs(bbf_via_kahler(self.ring, eta1, eta2, omega) / pairing - mu) / mu

        return self._aggregate("bbf_via_kahler", trial, 1e-9)

    def _symplectic(self) -> List[Check]:
        space = self.ring.space
        eigenvalues, vectors = np.linalg.eigh(space.gram)
        u = vectors[:, -1] / np.sqrt(eigenvalues[-1])
        v = vectors[:, -2] / np.sqrt(eigenvalues[-2])
        sigma = u + 1j * v
        ratios = []

        def trial(index: int) -> Optional[float]:
            eta = self._rng(8, index).standard_normal(self.ring.b)
            norm = space.q(eta, eta)
            if abs(norm) < 1e-3 * float(eta @ eta):
                return None
            ratios.append(bbf_via_symplectic(self.ring, eta, sigma) / norm)
            return 0.0 if ratios[-1] > 0 else 1.0

        checks = self._aggregate("bbf_via_symplectic_sign", trial, 0.0)
        spread = (max(ratios) - min(ratios)) / abs(ratios[0]) if ratios else 0.0
        checks.append(Check("bbf_via_symplectic_ratio", spread, spread <= 1e-9, params={"instances": len(ratios)}))
        return checks

    def _fit(self) -> List[Check]:
        space, n = self.ring.space, self.ring.n
        positive = self._positive_direction()

        def oracle(classes):
            return fujiki_product(self.ring, classes)

        gram, lam = bbf_fit(n, self.ring.b, oracle, positive, seed=self.config.seed, tol=self.tol.fit)
        scale = space.q(positive, positive)
        gram_error = float(np.max(np.abs(gram * scale - space.gram))) / float(np.max(np.abs(space.gram)))
        lam_error = abs(lam - self.ring.lam * scale ** n) / (self.ring.lam * scale ** n)
        defect = max(gram_error, lam_error)
        return [Check("bbf_fit", defect, defect <= self.tol.fit)]

    def jobs(self) -> List[Job]:
        return [
            Job("matching_vs_naive", self._matching),
            Job("symmetry", self._symmetry),
            Job("top_power", self._top_power),
            Job("differentiation", self._differentiation),
            Job("isotropic_vanishing", self._isotropic),
            Job("nilpotency", self._nilpotency),
            Job("bbf_via_kahler", self._kahler),
            Job("bbf_via_symplectic", self._symplectic),
            Job("bbf_fit", self._fit),
        ]
